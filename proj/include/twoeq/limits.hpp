#pragma once

// Gaussian and diffusion approximations of the experiment dynamics.
//
// Time scaling: in discrete-continuous time t = k/N, one step of size 1/N
// moves the state by -V0/N plus a martingale increment of variance
// sigma^2/N. Over a unit of model time that gives drift -V0 and diffusion
// coefficient sigma^2, the coefficients of
//   d zeta = -V0(zeta) dt + sigma(zeta) dW,
// whose generator is L phi = -V0 phi' + (1/2) sigma^2 phi''.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "twoeq/model.hpp"
#include "twoeq/polynomial.hpp"
#include "twoeq/rng.hpp"

namespace twoeq {

struct SampleContext {
  double state = 0.0;
  std::int64_t population = 0;
  std::int64_t replicates = 0;
  Representation mode = Representation::binary;
};

struct DistributionSample {
  std::vector<double> values;
  SampleContext context;
};

/// Times are multiples of the step (1/N for the discrete-continuous scheme).
struct TimeGridPath {
  std::vector<double> t_values;
  std::vector<double> states;
};

/// Standard normal CDF, 0.5 * erfc(-x / sqrt(2)).
double normal_cdf(double x);

/// Two-sided one-sample Kolmogorov-Smirnov distance against `cdf`.
double ks_statistic_one_sample(std::span<const double> sample,
                               const std::function<double(double)>& cdf);
double ks_statistic_one_sample(const DistributionSample& sample,
                               const std::function<double(double)>& cdf);

/// Sup distance between two empirical CDFs.
double ks_statistic_two_sample(std::span<const double> a,
                               std::span<const double> b);
double ks_statistic_two_sample(const DistributionSample& a,
                               const DistributionSample& b);

/// M independent one-step draws of sqrt(N) * martingale increment at the
/// lattice-snapped binary state c.
DistributionSample clt_martingale_sample(double c, const ModelParams& params,
                                         std::int64_t replicates,
                                         RngStream& rng);

/// One step of the normal-approximation difference equation with the given
/// standard normal value w. Clamped to the domain.
double gaussian_dse_step_with(double zeta, const ModelParams& params,
                              double w, Representation mode);
double gaussian_dse_step(double zeta, const ModelParams& params,
                         RngStream& rng, Representation mode);

enum class NoiseSwitch { on, off };

/// ceil(N T) steps of size 1/N with exact binomial martingale noise drawn at
/// the current (off-lattice) state.
TimeGridPath simulate_discrete_continuous(double c0, const ModelParams& params,
                                          double horizon, RngStream& rng,
                                          NoiseSwitch noise = NoiseSwitch::on);

/// Euler-Maruyama for d zeta = -V0 dt + sigma dW, clamped to [-1,1].
/// `diffusion_scale` multiplies sigma (0 gives the deterministic Euler
/// scheme for the drift ODE).
TimeGridPath simulate_ou_em(double c0, const ModelParams& params,
                            double horizon, double dt, RngStream& rng,
                            double diffusion_scale = 1.0);

/// Classical RK4 for c' = -V0(c) on a uniform grid; returns c(horizon).
double integrate_drift_ode(double c0, const ModelParams& params,
                           double horizon, std::int64_t steps = 100000);

/// L phi(c) = -V0(c) phi'(c) + (1/2) sigma^2(c) phi''(c).
double generator_apply(const Polynomial& phi, double c,
                       const ModelParams& params);

struct GeneratorCheck {
  double mc_estimate = 0.0;
  double exact = 0.0;
  double standard_error = 0.0;
  double z_score = 0.0;
  double state = 0.0;  // lattice-snapped c
};

/// Monte Carlo estimate of N E[phi(c + dzeta) - phi(c)] from M one-step
/// draws of the discrete-continuous scheme. The estimator subtracts
/// phi'(c) (dzeta - E dzeta), whose mean is exactly zero because the
/// binomial martingale increment has zero conditional mean; this removes
/// the O(sqrt(N)) first-order noise without biasing the estimate.
GeneratorCheck generator_consistency_check(double c, const ModelParams& params,
                                           const Polynomial& phi,
                                           std::int64_t replicates,
                                           RngStream& rng);

}  // namespace twoeq
