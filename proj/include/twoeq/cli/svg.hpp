#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace twoeq::cli {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct AxesConfig {
  std::string title;
  std::string x_label = "x";
  std::string y_label = "y";
  std::optional<std::pair<double, double>> x_range;  // data range if unset
  std::optional<std::pair<double, double>> y_range;
  bool zero_line = false;  // horizontal reference at y = 0
  int width = 720;
  int height = 440;
};

/// Standalone SVG document with linear axes, tick labels and a legend.
/// One <polyline> per series. Identical input gives identical bytes.
std::string emit_svg(const std::vector<Series>& series, const AxesConfig& axes);

}  // namespace twoeq::cli
