#pragma once

// Robbins-Monro stochastic approximation driven by the binary drift:
//   alpha(k+1) = alpha(k) + a_k [ -V0(alpha(k)) + sigma(alpha(k)) xi(k+1) ],
// with a_k = a / k, sigma(c) = sqrt(1 - V(c)^2) and E[xi^2] = 1/N.

#include <cstdint>
#include <string_view>

#include "twoeq/model.hpp"
#include "twoeq/rng.hpp"
#include "twoeq/trajectory.hpp"

namespace twoeq {

enum class NoiseMode {
  exact_binomial,  // standardized binomial martingale increment at the
                   // lattice-snapped state
  gaussian,        // standard normal / sqrt(N)
  none,            // xi = 0 (deterministic diagnostics)
};

enum class GainSchedule {
  harmonic,  // a_k = a / k
  constant,  // a_k = a
};

enum class DetectedLimit { pi, minus_one, boundary, undecided };

std::string_view to_string(NoiseMode mode);
std::string_view to_string(DetectedLimit limit);
NoiseMode parse_noise_mode(std::string_view text);

struct SAConfig {
  double gain = 0.5;
  double alpha0 = 0.0;
  std::int64_t max_steps = 100000;
  NoiseMode noise_mode = NoiseMode::exact_binomial;
  GainSchedule schedule = GainSchedule::harmonic;
  std::int64_t convergence_window = 1000;
  double convergence_tol = 0.02;

  void validate() const;
};

struct SAStep {
  double alpha;
  bool clamped;  // the raw update left [-1,1]
};

struct SAReport {
  double terminal_alpha = 0.0;
  DetectedLimit detected_limit = DetectedLimit::undecided;
  std::int64_t steps = 0;
  std::int64_t clamped_steps = 0;
  Trajectory trajectory;
};

/// a / k; throws DomainError for k < 1.
double gain(std::int64_t k, double a);

double step_size(std::int64_t k, const SAConfig& config);

/// Noise second moment E[xi^2] for the configured mode.
double noise_second_moment(NoiseMode mode, const ModelParams& params);

SAStep sa_step(double alpha, std::int64_t k, const ModelParams& params,
               const SAConfig& config, RngStream& rng);

SAReport run_sa(const SAConfig& config, const ModelParams& params,
                RngStream& rng);

struct LyapunovDrift {
  double first_order;   // -2 a_k V0(c) (c -/+ pi)
  double second_order;  // a_k^2 B_N(c)
  double total() const noexcept { return first_order + second_order; }
};

/// One-step drift of the test function (c - pi)^2 (plus) or (c + pi)^2
/// (minus) under the SA recursion.
LyapunovDrift lyapunov_drift(double c, std::int64_t k,
                             const ModelParams& params, const SAConfig& config,
                             Sign phi_sign);

/// Smallest k >= 1 from which lyapunov_drift(c, k, plus) stays negative for
/// every later k under the harmonic schedule, or -1 if the first-order term
/// is not negative at c.
std::int64_t supermartingale_onset(double c, const ModelParams& params,
                                   const SAConfig& config);

}  // namespace twoeq
