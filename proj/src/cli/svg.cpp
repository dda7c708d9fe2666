#include "twoeq/cli/svg.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>

#include "twoeq/errors.hpp"

namespace twoeq::cli {

namespace {

constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 150.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 55.0;
constexpr std::array<const char*, 6> kPalette = {
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string fixed(double x, int digits) {
  if (x == 0.0) x = 0.0;  // drop negative zero
  char buf[64];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, digits);
  if (ec != std::errc()) return "0";
  return std::string(buf, ptr);
}

std::string escape(const std::string& text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

// Tick spacing from {1, 2, 5} x 10^k giving about `target` intervals.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

std::pair<double, double> data_range(const std::vector<Series>& series,
                                     bool use_x) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      const double v = use_x ? x : y;
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!std::isfinite(lo)) return {0.0, 1.0};
  if (hi - lo < 1e-12) {
    const double pad = std::max(1e-6, std::abs(lo) * 0.05);
    return {lo - pad, hi + pad};
  }
  return {lo, hi};
}

}  // namespace

std::string emit_svg(const std::vector<Series>& series, const AxesConfig& axes) {
  if (series.empty()) throw ValidationError("emit_svg needs at least one series");
  const auto [x0, x1] = axes.x_range.value_or(data_range(series, true));
  auto [y0, y1] = axes.y_range.value_or(data_range(series, false));
  if (!axes.y_range) {
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
  }
  const double w = axes.width;
  const double h = axes.height;
  const double pw = w - kMarginLeft - kMarginRight;
  const double ph = h - kMarginTop - kMarginBottom;
  auto sx = [&](double x) { return kMarginLeft + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return kMarginTop + (y1 - y) / (y1 - y0) * ph; };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(w, 0) +
         "\" height=\"" + fixed(h, 0) + "\" viewBox=\"0 0 " + fixed(w, 0) +
         " " + fixed(h, 0) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + fixed(w, 0) + "\" height=\"" +
         fixed(h, 0) + "\" fill=\"white\"/>\n";
  if (!axes.title.empty()) {
    out += "<text x=\"" + fixed(kMarginLeft + pw / 2, 1) +
           "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
           escape(axes.title) + "</text>\n";
  }

  // Frame and ticks.
  out += "<rect x=\"" + fixed(kMarginLeft, 1) + "\" y=\"" + fixed(kMarginTop, 1) +
         "\" width=\"" + fixed(pw, 1) + "\" height=\"" + fixed(ph, 1) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  const double xs = nice_step(x1 - x0, 5);
  const int xdigits = std::max(0, -static_cast<int>(std::floor(std::log10(xs))));
  for (double t = std::ceil(x0 / xs - 1e-9) * xs; t <= x1 + 1e-9 * xs; t += xs) {
    const double px = sx(t);
    out += "<line x1=\"" + fixed(px, 2) + "\" y1=\"" + fixed(kMarginTop + ph, 2) +
           "\" x2=\"" + fixed(px, 2) + "\" y2=\"" + fixed(kMarginTop + ph + 5, 2) +
           "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + fixed(px, 2) + "\" y=\"" + fixed(kMarginTop + ph + 19, 2) +
           "\" text-anchor=\"middle\">" + fixed(t, xdigits) + "</text>\n";
  }
  const double ys = nice_step(y1 - y0, 5);
  const int ydigits = std::max(0, -static_cast<int>(std::floor(std::log10(ys))));
  for (double t = std::ceil(y0 / ys - 1e-9) * ys; t <= y1 + 1e-9 * ys; t += ys) {
    const double py = sy(t);
    out += "<line x1=\"" + fixed(kMarginLeft - 5, 2) + "\" y1=\"" + fixed(py, 2) +
           "\" x2=\"" + fixed(kMarginLeft, 2) + "\" y2=\"" + fixed(py, 2) +
           "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + fixed(kMarginLeft - 8, 2) + "\" y=\"" + fixed(py + 4, 2) +
           "\" text-anchor=\"end\">" + fixed(t, ydigits) + "</text>\n";
  }
  out += "<text x=\"" + fixed(kMarginLeft + pw / 2, 1) + "\" y=\"" +
         fixed(h - 12, 1) + "\" text-anchor=\"middle\">" + escape(axes.x_label) +
         "</text>\n";
  out += "<text x=\"16\" y=\"" + fixed(kMarginTop + ph / 2, 1) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         fixed(kMarginTop + ph / 2, 1) + ")\">" + escape(axes.y_label) +
         "</text>\n";
  if (axes.zero_line && y0 < 0.0 && y1 > 0.0) {
    out += "<line x1=\"" + fixed(kMarginLeft, 2) + "\" y1=\"" + fixed(sy(0.0), 2) +
           "\" x2=\"" + fixed(kMarginLeft + pw, 2) + "\" y2=\"" + fixed(sy(0.0), 2) +
           "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  }

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % kPalette.size()];
    out += "<polyline fill=\"none\" stroke=\"";
    out += color;
    out += "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& [x, y] : series[i].points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (!first) out += ' ';
      first = false;
      out += fixed(sx(x), 2) + "," + fixed(sy(std::clamp(y, y0, y1)), 2);
    }
    out += "\"/>\n";
    const double ly = kMarginTop + 14.0 + 18.0 * static_cast<double>(i);
    const double lx = kMarginLeft + pw + 12.0;
    out += "<line x1=\"" + fixed(lx, 2) + "\" y1=\"" + fixed(ly, 2) + "\" x2=\"" +
           fixed(lx + 22, 2) + "\" y2=\"" + fixed(ly, 2) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + fixed(lx + 28, 2) + "\" y=\"" + fixed(ly + 4, 2) + "\">" +
           escape(series[i].label) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace twoeq::cli
