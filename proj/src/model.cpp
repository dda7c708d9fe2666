#include "twoeq/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "twoeq/errors.hpp"

namespace twoeq {

namespace {

constexpr int kAdmissibilityGrid = 100000;
constexpr double kAdmissibilityMargin = 1e-9;

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream os;
    os << what << " = " << p << " is outside [0,1]";
    throw DomainError(os.str());
  }
}

void require_binary(double c, const char* what) {
  if (!(c >= -1.0 && c <= 1.0)) {
    std::ostringstream os;
    os << what << " = " << c << " is outside [-1,1]";
    throw DomainError(os.str());
  }
}

// Quartic core shared by both frequency branches.
double frequency_quartic(double p, const ModelParams& m) {
  return m.amplitude() * p * (1.0 - p) * (p - m.pi_minus()) *
         (p - m.pi_plus());
}

}  // namespace

std::string_view to_string(ZoneLabel zone) {
  switch (zone) {
    case ZoneLabel::LeftRepulsiveZone: return "LeftRepulsiveZone";
    case ZoneLabel::MidAttractiveZone: return "MidAttractiveZone";
    case ZoneLabel::RightAttractiveZone: return "RightAttractiveZone";
    case ZoneLabel::AtEquilibriumPlus: return "AtEquilibriumPlus";
    case ZoneLabel::AtEquilibriumMinus: return "AtEquilibriumMinus";
    case ZoneLabel::AtAbsorbingBoundary: return "AtAbsorbingBoundary";
  }
  return "unknown";
}

std::string_view to_string(Representation rep) {
  return rep == Representation::frequency ? "frequency" : "binary";
}

Representation parse_representation(std::string_view text) {
  if (text == "frequency") return Representation::frequency;
  if (text == "binary") return Representation::binary;
  throw ValidationError("mode must be 'frequency' or 'binary', got '" +
                        std::string(text) + "'");
}

ModelParams::ModelParams(double pi_plus, double pi_minus, double gap,
                         double amplitude, std::int64_t population)
    : pi_plus_(pi_plus),
      pi_minus_(pi_minus),
      gap_(gap),
      amplitude_(amplitude),
      population_(population) {
  if (!(pi_minus_ > 0.0 && pi_minus_ < pi_plus_ && pi_plus_ < 1.0)) {
    std::ostringstream os;
    os << "equilibria must satisfy 0 < pi_minus < pi_plus < 1 (pi_plus = "
       << pi_plus_ << ", pi_minus = " << pi_minus_ << ")";
    throw ValidationError(os.str());
  }
  if (std::abs(pi_plus_ + pi_minus_ - 1.0) > kIdentityTolerance) {
    throw ValidationError("equilibria must satisfy pi_plus + pi_minus = 1");
  }
  if (!(amplitude_ > 0.0) || !std::isfinite(amplitude_)) {
    throw ValidationError("amplitude V must be a finite value > 0");
  }
  if (population_ < 1) {
    throw ValidationError("population N must be >= 1");
  }

  // Admissibility of V: V+(p) = p + drift must stay in [0,1]. The slope at
  // p = 0 is 1 - V pi_plus pi_minus, so the boundary value alone cannot
  // detect a violation there; check it explicitly, then sweep the grid.
  if (1.0 - amplitude_ * pi_plus_ * pi_minus_ < 0.0) {
    std::ostringstream os;
    os << "amplitude V = " << amplitude_
       << " drives the one-step regression below 0 near p = 0 (requires V <= "
       << 1.0 / (pi_plus_ * pi_minus_) << ")";
    throw ValidationError(os.str());
  }
  for (int i = 0; i <= kAdmissibilityGrid; ++i) {
    const double p = static_cast<double>(i) / kAdmissibilityGrid;
    const double next = p - frequency_quartic(p, *this);
    if (next < -kAdmissibilityMargin || next > 1.0 + kAdmissibilityMargin) {
      std::ostringstream os;
      os << "amplitude V = " << amplitude_
         << " moves the one-step regression outside [0,1] at p = " << p;
      throw ValidationError(os.str());
    }
  }
}

ModelParams ModelParams::from_pi_plus(double pi_plus, double amplitude,
                                      std::int64_t population) {
  const double pi_minus = 1.0 - pi_plus;
  return ModelParams(pi_plus, pi_minus, pi_plus - pi_minus, amplitude,
                     population);
}

ModelParams ModelParams::from_gap(double gap, double amplitude,
                                  std::int64_t population) {
  if (!(gap > 0.0 && gap < 1.0)) {
    std::ostringstream os;
    os << "gap pi = " << gap << " must lie in (0,1)";
    throw ValidationError(os.str());
  }
  return ModelParams(0.5 * (1.0 + gap), 0.5 * (1.0 - gap), gap, amplitude,
                     population);
}

ModelParams ModelParams::with_population(std::int64_t population) const {
  return ModelParams(pi_plus_, pi_minus_, gap_, amplitude_, population);
}

double rfi_frequency_plus(double p, const ModelParams& params) {
  require_probability(p, "p");
  return -frequency_quartic(p, params);
}

double rfi_frequency_minus(double p_minus, const ModelParams& params) {
  require_probability(p_minus, "p_minus");
  return frequency_quartic(p_minus, params);
}

double rfi_binary(double c, const ModelParams& params) {
  require_binary(c, "c");
  const double pi = params.gap();
  return params.amplitude() / 8.0 * (1.0 - c * c) * (c - pi) * (c + pi);
}

double regression_one_step_frequency(double p, const ModelParams& params) {
  const double next = p + rfi_frequency_plus(p, params);
  if (next < 0.0 || next > 1.0) {
    throw ConstraintError("one-step frequency regression left [0,1]");
  }
  return next;
}

double regression_one_step_frequency_minus(double p_minus,
                                           const ModelParams& params) {
  const double next = p_minus + rfi_frequency_minus(p_minus, params);
  if (next < 0.0 || next > 1.0) {
    throw ConstraintError("one-step frequency regression left [0,1]");
  }
  return next;
}

double regression_one_step_binary(double c, const ModelParams& params) {
  return c - rfi_binary(c, params);
}

double noise_variance_binary(double c, const ModelParams& params) {
  const double mean = regression_one_step_binary(c, params);
  return std::max(0.0, 1.0 - mean * mean);
}

double noise_variance_frequency(double p_plus, double p_minus,
                                const ModelParams& params) {
  if (std::abs(p_plus + p_minus - 1.0) > kIdentityTolerance) {
    std::ostringstream os;
    os << "frequencies must balance: p_plus + p_minus = "
       << p_plus + p_minus << " != 1";
    throw ValidationError(os.str());
  }
  return regression_one_step_frequency(p_plus, params) *
         regression_one_step_frequency_minus(p_minus, params);
}

double classifier_lambda(double c, Sign sign, const ModelParams& params) {
  require_binary(c, "c");
  const double pi = params.gap();
  const double shifted = sign == Sign::plus ? c + pi : c - pi;
  return params.amplitude() / 8.0 * (1.0 - c * c) * shifted;
}

ZoneLabel classify_zone(double state, Representation rep,
                        const ModelParams& params, double tol) {
  const double lo = domain_lower(rep);
  if (rep == Representation::frequency) {
    require_probability(state, "state");
  } else {
    require_binary(state, "state");
  }
  const double eq_plus =
      rep == Representation::frequency ? params.pi_plus() : params.gap();
  const double eq_minus =
      rep == Representation::frequency ? params.pi_minus() : -params.gap();

  if (std::abs(state - lo) <= tol || std::abs(state - 1.0) <= tol) {
    return ZoneLabel::AtAbsorbingBoundary;
  }
  if (std::abs(state - eq_plus) <= tol) return ZoneLabel::AtEquilibriumPlus;
  if (std::abs(state - eq_minus) <= tol) return ZoneLabel::AtEquilibriumMinus;
  if (state < eq_minus) return ZoneLabel::LeftRepulsiveZone;
  if (state < eq_plus) return ZoneLabel::MidAttractiveZone;
  return ZoneLabel::RightAttractiveZone;
}

double drift(double state, Representation rep, const ModelParams& params) {
  return rep == Representation::frequency ? rfi_frequency_plus(state, params)
                                          : -rfi_binary(state, params);
}

double domain_lower(Representation rep) noexcept {
  return rep == Representation::frequency ? 0.0 : -1.0;
}

}  // namespace twoeq
