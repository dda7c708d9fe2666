#include "twoeq/limits.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "twoeq/errors.hpp"
#include "twoeq/sde.hpp"

namespace twoeq {

namespace {

std::int64_t grid_steps(double horizon, double dt) {
  // Tolerate representation error in horizon/dt before rounding up.
  const double ratio = horizon / dt;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) {
    return static_cast<std::int64_t>(nearest);
  }
  return static_cast<std::int64_t>(std::ceil(ratio));
}

void require_binary_state(double c) {
  if (!(c >= -1.0 && c <= 1.0)) {
    throw DomainError("state must lie in [-1,1]");
  }
}

// Martingale increment of the exact binomial law at an arbitrary state c:
// 2 nu / N - 1 - V(c) with nu ~ Binomial(N, (1 + V(c)) / 2).
double binomial_martingale_increment(double c, const ModelParams& params,
                                     RngStream& rng) {
  const double mean = regression_one_step_binary(c, params);
  const double prob = std::clamp(0.5 * (1.0 + mean), 0.0, 1.0);
  const std::int64_t n = params.population();
  const std::int64_t nu = binomial_sample(n, prob, rng);
  return 2.0 * static_cast<double>(nu) / static_cast<double>(n) - 1.0 - mean;
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_statistic_one_sample(std::span<const double> sample,
                               const std::function<double(double)>& cdf) {
  if (sample.empty()) throw ValidationError("KS sample must be nonempty");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double m = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / m - f,
                  f - static_cast<double>(i) / m});
  }
  return d;
}

double ks_statistic_one_sample(const DistributionSample& sample,
                               const std::function<double(double)>& cdf) {
  return ks_statistic_one_sample(std::span<const double>(sample.values), cdf);
}

double ks_statistic_two_sample(std::span<const double> a,
                               std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw ValidationError("KS samples must be nonempty");
  }
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx -
                             static_cast<double>(j) / ny));
  }
  return d;
}

double ks_statistic_two_sample(const DistributionSample& a,
                               const DistributionSample& b) {
  return ks_statistic_two_sample(std::span<const double>(a.values),
                                 std::span<const double>(b.values));
}

DistributionSample clt_martingale_sample(double c, const ModelParams& params,
                                         std::int64_t replicates,
                                         RngStream& rng) {
  if (replicates < 2) throw ValidationError("replicates must be >= 2");
  const ExperimentState state = ExperimentState::snapped(
      Representation::binary, c, params.population());
  const double root_n = std::sqrt(static_cast<double>(params.population()));
  DistributionSample out;
  out.context = SampleContext{state.value(), params.population(), replicates,
                              Representation::binary};
  out.values.resize(static_cast<std::size_t>(replicates));
  for (auto& v : out.values) {
    v = root_n * step_binary(state, params, rng).martingale_increment;
  }
  return out;
}

double gaussian_dse_step_with(double zeta, const ModelParams& params, double w,
                              Representation mode) {
  const double root_n = std::sqrt(static_cast<double>(params.population()));
  double next;
  if (mode == Representation::binary) {
    const double sigma = std::sqrt(noise_variance_binary(zeta, params));
    next = zeta - rfi_binary(zeta, params) + sigma * w / root_n;
  } else {
    const double sigma =
        std::sqrt(noise_variance_frequency(zeta, 1.0 - zeta, params));
    next = zeta + rfi_frequency_plus(zeta, params) + sigma * w / root_n;
  }
  return std::clamp(next, domain_lower(mode), domain_upper(mode));
}

double gaussian_dse_step(double zeta, const ModelParams& params, RngStream& rng,
                         Representation mode) {
  return gaussian_dse_step_with(zeta, params, rng.normal(), mode);
}

TimeGridPath simulate_discrete_continuous(double c0, const ModelParams& params,
                                          double horizon, RngStream& rng,
                                          NoiseSwitch noise) {
  require_binary_state(c0);
  if (!(horizon > 0.0)) throw ValidationError("horizon T must be > 0");
  const std::int64_t n = params.population();
  const double inv_n = 1.0 / static_cast<double>(n);
  const std::int64_t steps = grid_steps(horizon, inv_n);

  TimeGridPath path;
  path.t_values.reserve(static_cast<std::size_t>(steps) + 1);
  path.states.reserve(static_cast<std::size_t>(steps) + 1);
  double zeta = c0;
  path.t_values.push_back(0.0);
  path.states.push_back(zeta);
  for (std::int64_t k = 1; k <= steps; ++k) {
    double next = zeta - rfi_binary(zeta, params) * inv_n;
    if (noise == NoiseSwitch::on) {
      next += binomial_martingale_increment(zeta, params, rng);
    }
    zeta = std::clamp(next, -1.0, 1.0);
    path.t_values.push_back(static_cast<double>(k) / static_cast<double>(n));
    path.states.push_back(zeta);
  }
  return path;
}

TimeGridPath simulate_ou_em(double c0, const ModelParams& params,
                            double horizon, double dt, RngStream& rng,
                            double diffusion_scale) {
  require_binary_state(c0);
  if (!(horizon > 0.0)) throw ValidationError("horizon T must be > 0");
  if (!(dt > 0.0)) throw ValidationError("dt must be > 0");
  const std::int64_t steps = grid_steps(horizon, dt);
  const double root_dt = std::sqrt(dt);

  TimeGridPath path;
  path.t_values.reserve(static_cast<std::size_t>(steps) + 1);
  path.states.reserve(static_cast<std::size_t>(steps) + 1);
  double zeta = c0;
  path.t_values.push_back(0.0);
  path.states.push_back(zeta);
  for (std::int64_t k = 1; k <= steps; ++k) {
    double next = zeta - rfi_binary(zeta, params) * dt;
    if (diffusion_scale != 0.0) {
      const double sigma = std::sqrt(noise_variance_binary(zeta, params));
      next += diffusion_scale * sigma * root_dt * rng.normal();
    }
    zeta = std::clamp(next, -1.0, 1.0);
    path.t_values.push_back(static_cast<double>(k) * dt);
    path.states.push_back(zeta);
  }
  return path;
}

double integrate_drift_ode(double c0, const ModelParams& params,
                           double horizon, std::int64_t steps) {
  require_binary_state(c0);
  if (steps < 1) throw ValidationError("ODE steps must be >= 1");
  const double h = horizon / static_cast<double>(steps);
  auto f = [&](double c) {
    return -rfi_binary(std::clamp(c, -1.0, 1.0), params);
  };
  double c = c0;
  for (std::int64_t i = 0; i < steps; ++i) {
    const double k1 = f(c);
    const double k2 = f(c + 0.5 * h * k1);
    const double k3 = f(c + 0.5 * h * k2);
    const double k4 = f(c + h * k3);
    c += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return c;
}

double generator_apply(const Polynomial& phi, double c,
                       const ModelParams& params) {
  const Polynomial d1 = phi.derivative();
  const Polynomial d2 = d1.derivative();
  return -rfi_binary(c, params) * d1(c) +
         0.5 * noise_variance_binary(c, params) * d2(c);
}

GeneratorCheck generator_consistency_check(double c, const ModelParams& params,
                                           const Polynomial& phi,
                                           std::int64_t replicates,
                                           RngStream& rng) {
  if (replicates < 2) throw ValidationError("replicates must be >= 2");
  const ExperimentState state = ExperimentState::snapped(
      Representation::binary, c, params.population());
  const double x = state.value();
  const double n = static_cast<double>(params.population());
  const double mean_step = -rfi_binary(x, params) / n;
  const double slope = phi.derivative()(x);
  const double base = phi(x);

  const double m = static_cast<double>(replicates);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::int64_t i = 0; i < replicates; ++i) {
    const double dz = mean_step + binomial_martingale_increment(x, params, rng);
    const double y = n * (phi(x + dz) - base - slope * (dz - mean_step));
    sum += y;
    sum_sq += y * y;
  }
  GeneratorCheck out;
  out.state = x;
  out.mc_estimate = sum / m;
  const double var = std::max(0.0, (sum_sq - m * out.mc_estimate * out.mc_estimate) / (m - 1.0));
  out.standard_error = std::sqrt(var / m);
  out.exact = generator_apply(phi, x, params);
  const double diff = out.mc_estimate - out.exact;
  out.z_score = out.standard_error > 0.0 ? diff / out.standard_error
                                         : (diff == 0.0 ? 0.0 : INFINITY);
  return out;
}

}  // namespace twoeq
