#include "twoeq/stochastic_approx.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "twoeq/errors.hpp"
#include "twoeq/sde.hpp"

namespace twoeq {

std::string_view to_string(NoiseMode mode) {
  switch (mode) {
    case NoiseMode::exact_binomial: return "exact_binomial";
    case NoiseMode::gaussian: return "gaussian";
    case NoiseMode::none: return "none";
  }
  return "unknown";
}

std::string_view to_string(DetectedLimit limit) {
  switch (limit) {
    case DetectedLimit::pi: return "pi";
    case DetectedLimit::minus_one: return "minus_one";
    case DetectedLimit::boundary: return "boundary";
    case DetectedLimit::undecided: return "undecided";
  }
  return "unknown";
}

NoiseMode parse_noise_mode(std::string_view text) {
  if (text == "exact_binomial") return NoiseMode::exact_binomial;
  if (text == "gaussian") return NoiseMode::gaussian;
  if (text == "none") return NoiseMode::none;
  throw ValidationError(
      "noise_mode must be 'exact_binomial', 'gaussian' or 'none', got '" +
      std::string(text) + "'");
}

void SAConfig::validate() const {
  if (!(gain > 0.0)) throw ValidationError("gain a must be > 0");
  if (!(alpha0 >= -1.0 && alpha0 <= 1.0)) {
    throw ValidationError("alpha0 must lie in [-1,1]");
  }
  if (max_steps < 1) throw ValidationError("max_steps must be >= 1");
  if (convergence_window < 1) {
    throw ValidationError("convergence_window must be >= 1");
  }
  if (!(convergence_tol > 0.0)) {
    throw ValidationError("convergence_tol must be > 0");
  }
}

double gain(std::int64_t k, double a) {
  if (k < 1) throw DomainError("gain index k must be >= 1");
  return a / static_cast<double>(k);
}

double step_size(std::int64_t k, const SAConfig& config) {
  if (config.schedule == GainSchedule::constant) {
    if (k < 1) throw DomainError("gain index k must be >= 1");
    return config.gain;
  }
  return gain(k, config.gain);
}

double noise_second_moment(NoiseMode mode, const ModelParams& params) {
  if (mode == NoiseMode::none) return 0.0;
  return 1.0 / static_cast<double>(params.population());
}

SAStep sa_step(double alpha, std::int64_t k, const ModelParams& params,
               const SAConfig& config, RngStream& rng) {
  const double a_k = step_size(k, config);
  const double pull = -rfi_binary(alpha, params);

  double raw;
  if (config.noise_mode == NoiseMode::none) {
    raw = alpha + a_k * pull;
  } else {
    double xi = 0.0;
    if (config.noise_mode == NoiseMode::gaussian) {
      xi = rng.normal() / std::sqrt(static_cast<double>(params.population()));
    } else {
      const ExperimentState at = ExperimentState::snapped(
          Representation::binary, alpha, params.population());
      const double scale =
          std::sqrt(noise_variance_binary(at.value(), params));
      if (scale > 0.0) {
        xi = step_binary(at, params, rng).martingale_increment / scale;
      }
    }
    const double sigma = std::sqrt(noise_variance_binary(alpha, params));
    raw = alpha + a_k * (pull + sigma * xi);
  }
  const double clamped = std::clamp(raw, -1.0, 1.0);
  return SAStep{clamped, clamped != raw};
}

SAReport run_sa(const SAConfig& config, const ModelParams& params,
                RngStream& rng) {
  config.validate();
  const double pi = params.gap();
  const double tol = config.convergence_tol;

  // Consecutive iterates (including alpha0) near each candidate limit.
  std::int64_t run_pi = 0;
  std::int64_t run_minus = 0;
  std::int64_t run_plus = 0;
  auto track = [&](double x) {
    run_pi = std::abs(x - pi) < tol ? run_pi + 1 : 0;
    run_minus = std::abs(x + 1.0) < tol ? run_minus + 1 : 0;
    run_plus = std::abs(x - 1.0) < tol ? run_plus + 1 : 0;
  };

  TrajectoryRecorder recorder;
  double alpha = config.alpha0;
  recorder.record(0.0, alpha);
  track(alpha);

  SAReport report;
  bool fixed_point = false;
  std::int64_t k = 1;
  for (; k <= config.max_steps; ++k) {
    const SAStep s = sa_step(alpha, k, params, config, rng);
    if (s.clamped) ++report.clamped_steps;
    if (config.noise_mode == NoiseMode::none && s.alpha == alpha) {
      fixed_point = true;
      break;
    }
    alpha = s.alpha;
    recorder.record(static_cast<double>(k), alpha);
    track(alpha);
  }
  report.steps = k - 1;
  report.terminal_alpha = alpha;

  const std::int64_t need = fixed_point ? 1 : config.convergence_window;
  if (run_pi >= need) {
    report.detected_limit = DetectedLimit::pi;
  } else if (run_minus >= need) {
    report.detected_limit = DetectedLimit::minus_one;
  } else if (run_plus >= need) {
    report.detected_limit = DetectedLimit::boundary;
  }
  report.trajectory = Trajectory{TrajectoryMode::sa,
                                 std::move(recorder).finish(), rng.seed(),
                                 params};
  return report;
}

LyapunovDrift lyapunov_drift(double c, std::int64_t k,
                             const ModelParams& params, const SAConfig& config,
                             Sign phi_sign) {
  const double a_k = step_size(k, config);
  const double v0 = rfi_binary(c, params);
  const double pi = params.gap();
  const double offset = phi_sign == Sign::plus ? c - pi : c + pi;
  const double b_n = v0 * v0 + noise_variance_binary(c, params) *
                                   noise_second_moment(config.noise_mode,
                                                       params);
  return LyapunovDrift{-2.0 * a_k * v0 * offset, a_k * a_k * b_n};
}

std::int64_t supermartingale_onset(double c, const ModelParams& params,
                                   const SAConfig& config) {
  const double v0 = rfi_binary(c, params);
  const double pull = 2.0 * v0 * (c - params.gap());
  if (!(pull > 0.0)) return -1;
  const double b_n = v0 * v0 + noise_variance_binary(c, params) *
                                   noise_second_moment(config.noise_mode,
                                                       params);
  if (config.schedule == GainSchedule::constant) {
    return config.gain * b_n < pull ? 1 : -1;
  }
  // -a/k * pull + a^2/k^2 * b_n < 0  <=>  k > a b_n / pull.
  return static_cast<std::int64_t>(std::floor(config.gain * b_n / pull)) + 1;
}

}  // namespace twoeq
