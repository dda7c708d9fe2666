#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "twoeq/ensemble.hpp"
#include "twoeq/errors.hpp"
#include "twoeq/limits.hpp"

using namespace twoeq;

namespace {

const ModelParams kParams = ModelParams::from_gap(0.4, 1.0, 1000);

double ode_drift(double c) {
  return oracle::binary_increment_from_frequency(c, 0.7, 1.0);
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace

TEST_CASE("normal CDF") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(40.0) == 1.0);
  CHECK(normal_cdf(-40.0) == 0.0);
  CHECK(std::abs(normal_cdf(1.96) - oracle::normal_cdf_quadrature(1.96)) < 1e-10);
  CHECK(std::abs(normal_cdf(1.96) - 0.9750) < 1e-4);
  for (double x = -6.0; x <= 6.0; x += 0.37) {
    CHECK(std::abs(normal_cdf(x) - oracle::normal_cdf_quadrature(x)) < 1e-10);
    CHECK(normal_cdf(x) + normal_cdf(-x) == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("one-sample KS statistic") {
  std::vector<double> one{0.0};
  CHECK(ks_statistic_one_sample(one, normal_cdf) == 0.5);

  const int m = 250;
  std::vector<double> quantiles;
  for (int i = 1; i <= m; ++i) quantiles.push_back((i - 0.5) / m);
  auto uniform_cdf = [](double x) { return std::clamp(x, 0.0, 1.0); };
  CHECK(ks_statistic_one_sample(quantiles, uniform_cdf) ==
        doctest::Approx(0.5 / m).epsilon(1e-12));

  // Invariance under a strictly monotone transform of sample and cdf.
  RngStream rng(4);
  std::vector<double> xs(500);
  std::vector<double> ys(500);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = rng.normal();
    ys[i] = std::exp(xs[i]);
  }
  const double d1 = ks_statistic_one_sample(xs, normal_cdf);
  const double d2 = ks_statistic_one_sample(
      ys, [](double y) { return normal_cdf(std::log(y)); });
  CHECK(d1 == doctest::Approx(d2).epsilon(1e-12));

  CHECK_THROWS_AS(ks_statistic_one_sample(std::vector<double>{}, normal_cdf),
                  ValidationError);
}

TEST_CASE("two-sample KS statistic") {
  const std::vector<double> a{0.1, 0.5, 0.5, 0.9};
  CHECK(ks_statistic_two_sample(a, a) == 0.0);
  const std::vector<double> b{2.0, 3.0};
  CHECK(ks_statistic_two_sample(a, b) == 1.0);
  CHECK(ks_statistic_two_sample(b, a) == 1.0);

  // Against a direct evaluation of sup |F_a - F_b| over all sample points.
  RngStream rng(6);
  std::vector<double> x(300);
  std::vector<double> y(170);
  for (auto& v : x) v = std::round(rng.normal() * 4.0) / 4.0;
  for (auto& v : y) v = std::round((rng.normal() + 0.3) * 4.0) / 4.0;
  double brute = 0.0;
  for (const auto* s : {&x, &y}) {
    for (double t : *s) {
      double fx = 0.0;
      double fy = 0.0;
      for (double v : x) fx += v <= t;
      for (double v : y) fy += v <= t;
      brute = std::max(brute, std::abs(fx / x.size() - fy / y.size()));
    }
  }
  CHECK(ks_statistic_two_sample(x, y) == doctest::Approx(brute).epsilon(1e-14));

  // Same-law samples of 10^3 stay below the 0.001-level critical value.
  const int reps = 50;
  int below = 0;
  for (int r = 0; r < reps; ++r) {
    RngStream g(1000 + r);
    std::vector<double> p(1000);
    std::vector<double> q(1000);
    for (auto& v : p) v = g.normal();
    for (auto& v : q) v = g.normal();
    below += ks_statistic_two_sample(p, q) < 1.95 * std::sqrt(2.0 / 1000.0);
  }
  CHECK(below >= 49);
}

TEST_CASE("CLT sample at the boundary is degenerate") {
  RngStream rng(1);
  const DistributionSample s = clt_martingale_sample(1.0, kParams, 200, rng);
  for (double v : s.values) CHECK(v == 0.0);
  CHECK(s.context.replicates == 200);
  CHECK(s.context.population == 1000);
}

TEST_CASE("CLT sample moments over a grid of states") {
  const int m = 40000;
  for (double c : {-0.8, -0.4, 0.0, 0.2, 0.6}) {
    CAPTURE(c);
    RngStream rng(21, static_cast<std::uint64_t>(std::lround((c + 1) * 10)));
    const DistributionSample s = clt_martingale_sample(c, kParams, m, rng);
    const double sigma2 = noise_variance_binary(s.context.state, kParams);
    const double mean = mean_of(s.values);
    const double var = variance_of(s.values);
    CHECK(std::abs(mean) < 4.0 * std::sqrt(var / m));
    // Variance of the sample variance is about 2 sigma^4 / M for near-normal data.
    CHECK(std::abs(var - sigma2) < 4.0 * sigma2 * std::sqrt(2.0 / m) * 1.1);
  }
}

TEST_CASE("KS distance to the normal law shrinks with N") {
  const int m = 5000;
  int decreasing = 0;
  double sums[3] = {0.0, 0.0, 0.0};
  for (int rep = 0; rep < 5; ++rep) {
    double ks[3];
    int j = 0;
    for (std::int64_t n : {100, 1000, 10000}) {
      const ModelParams p = kParams.with_population(n);
      RngStream rng(300 + rep, static_cast<std::uint64_t>(n));
      const DistributionSample s = clt_martingale_sample(0.2, p, m, rng);
      const double sigma = std::sqrt(noise_variance_binary(s.context.state, p));
      ks[j] = ks_statistic_one_sample(s, [&](double x) { return normal_cdf(x / sigma); });
      sums[j] += ks[j];
      ++j;
    }
    decreasing += ks[0] > ks[2];
  }
  CHECK(decreasing >= 4);
  CHECK(sums[0] > sums[1]);
  CHECK(sums[1] > sums[2]);
}

TEST_CASE("normal-approximation step") {
  CHECK(gaussian_dse_step_with(1.0, kParams, 2.5, Representation::binary) == 1.0);
  CHECK(gaussian_dse_step_with(-1.0, kParams, -2.5, Representation::binary) == -1.0);
  CHECK(gaussian_dse_step_with(0.0, kParams, 0.0, Representation::binary) ==
        doctest::Approx(0.02).epsilon(1e-12));
  CHECK(gaussian_dse_step_with(0.5, kParams, 0.0, Representation::frequency) ==
        doctest::Approx(0.51).epsilon(1e-12));

  const ModelParams big = kParams.with_population(10000);
  const int m = 100000;
  RngStream rng(51);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < m; ++i) {
    const double z = gaussian_dse_step(0.0, big, rng, Representation::binary);
    sum += z;
    sum_sq += z * z;
  }
  const double mean = sum / m;
  const double var = sum_sq / m - mean * mean;
  CHECK(std::abs(mean - 0.02) < 4.0 * std::sqrt(var / m));
}

TEST_CASE("discrete-continuous paths") {
  RngStream rng(3);
  for (double c0 : {-1.0, 1.0}) {
    const TimeGridPath p = simulate_discrete_continuous(c0, kParams, 1.0, rng);
    for (double s : p.states) CHECK(s == c0);
  }
  const TimeGridPath p = simulate_discrete_continuous(0.0, kParams, 1.0, rng);
  CHECK(p.t_values.size() == 1001);
  CHECK(p.t_values.back() == 1.0);
  CHECK(p.t_values[500] == 0.5);
  const TimeGridPath q = simulate_discrete_continuous(0.0, kParams, 0.0105, rng);
  CHECK(q.t_values.size() == 12);  // ceil(10.5) steps
  CHECK_THROWS_AS(simulate_discrete_continuous(1.5, kParams, 1.0, rng), DomainError);
  CHECK_THROWS_AS(simulate_discrete_continuous(0.0, kParams, 0.0, rng), ValidationError);
}

TEST_CASE("drift ODE integrator matches the time-inversion oracle") {
  for (double c0 : {0.0, 0.2, -0.3, 0.8}) {
    for (double horizon : {0.5, 1.0, 3.0}) {
      const double a = integrate_drift_ode(c0, kParams, horizon);
      const double b = oracle::ode_by_time_inversion(ode_drift, c0, horizon);
      CHECK(std::abs(a - b) < 1e-9);
    }
  }
}

TEST_CASE("drift-only scheme converges to the ODE at first order") {
  const double exact = oracle::ode_by_time_inversion(ode_drift, 0.0, 1.0);
  double errors[3];
  int j = 0;
  for (std::int64_t n : {1000, 4000, 16000}) {
    RngStream rng(1);
    const TimeGridPath p = simulate_discrete_continuous(
        0.0, kParams.with_population(n), 1.0, rng, NoiseSwitch::off);
    errors[j++] = std::abs(p.states.back() - exact);
  }
  CHECK(errors[0] > 0.0);
  // At least halving per quadrupling; Euler's order one gives about 4x.
  CHECK(errors[0] / errors[1] >= 2.0);
  CHECK(errors[1] / errors[2] >= 2.0);
  CHECK(errors[0] / errors[1] == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("Euler-Maruyama basics") {
  RngStream rng(8);
  for (double c0 : {-1.0, 1.0}) {
    const TimeGridPath p = simulate_ou_em(c0, kParams, 1.0, 0.001, rng);
    for (double s : p.states) CHECK(s == c0);
  }
  // Without diffusion EM is the deterministic Euler scheme, which here
  // coincides with the drift-only discrete-continuous scheme.
  const TimeGridPath em = simulate_ou_em(0.1, kParams, 1.0, 1.0 / 1000.0, rng, 0.0);
  const TimeGridPath dc =
      simulate_discrete_continuous(0.1, kParams, 1.0, rng, NoiseSwitch::off);
  REQUIRE(em.states.size() == dc.states.size());
  for (std::size_t i = 0; i < em.states.size(); ++i) CHECK(em.states[i] == dc.states[i]);
  CHECK_THROWS_AS(simulate_ou_em(0.0, kParams, 1.0, 0.0, rng), ValidationError);
}

TEST_CASE("Euler-Maruyama marginal mean is stable as dt shrinks") {
  const int m = 4000;
  double means[2];
  double ses[2];
  int j = 0;
  for (double dt : {1e-3, 2.5e-4}) {
    const auto t = run_ensemble(m, 77 + j, [&](RngStream& rng, std::int64_t) {
      return simulate_ou_em(0.0, kParams, 1.0, dt, rng).states.back();
    });
    means[j] = mean_of(t);
    ses[j] = std::sqrt(variance_of(t) / m);
    ++j;
  }
  CHECK(std::abs(means[0] - means[1]) <= 2.0 * std::hypot(ses[0], ses[1]));
}

TEST_CASE("small diffusion ensemble agrees with EM and the ODE") {
  const int m = 600;
  const ModelParams p = kParams;
  struct Out {
    double dc;
    double em;
  };
  const auto runs = run_ensemble(m, 909, [&](RngStream& rng, std::int64_t i) {
    const double dc = simulate_discrete_continuous(0.0, p, 1.0, rng).states.back();
    RngStream other(909, static_cast<std::uint64_t>(m + i));
    const double em = simulate_ou_em(0.0, p, 1.0, 1.0 / 1000.0, other).states.back();
    return Out{dc, em};
  });
  std::vector<double> dc;
  std::vector<double> em;
  for (const auto& r : runs) {
    dc.push_back(r.dc);
    em.push_back(r.em);
  }
  CHECK(ks_statistic_two_sample(dc, em) < 1.95 * std::sqrt(2.0 / m));
  const double ode = oracle::ode_by_time_inversion(ode_drift, 0.0, 1.0);
  CHECK(std::abs(mean_of(dc) - ode) < 4.0 * std::sqrt(variance_of(dc) / m));
  CHECK(std::abs(mean_of(em) - ode) < 4.0 * std::sqrt(variance_of(em) / m));
}

TEST_CASE("generator of the limiting diffusion") {
  CHECK(generator_apply(Polynomial{3.0}, 0.3, kParams) == 0.0);
  CHECK(generator_apply(Polynomial{0.0, 1.0}, 0.0, kParams) ==
        doctest::Approx(0.02).epsilon(1e-12));
  // V0(0.2) = -0.0144, V(0.2) = 0.2144, sigma^2 = 1 - 0.2144^2.
  const double expected = 0.0144 * 0.4 + (1.0 - 0.2144 * 0.2144);
  CHECK(generator_apply(Polynomial{0.0, 0.0, 1.0}, 0.2, kParams) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::abs(generator_apply(Polynomial{0.0, 0.0, 1.0}, 0.2, kParams) - 0.9598) < 1e-4);
  CHECK_THROWS_AS(Polynomial({1, 2, 3, 4, 5, 6, 7, 8}), ValidationError);
}

TEST_CASE("generator Monte Carlo: trivial test functions") {
  RngStream rng(2);
  const GeneratorCheck flat = generator_consistency_check(0.2, kParams, Polynomial{5.0}, 1000, rng);
  CHECK(flat.mc_estimate == 0.0);
  CHECK(flat.exact == 0.0);
  CHECK(flat.z_score == 0.0);
  const GeneratorCheck line =
      generator_consistency_check(0.2, kParams, Polynomial{0.0, 1.0}, 1000, rng);
  CHECK(line.mc_estimate == doctest::Approx(line.exact).epsilon(1e-9));
}

TEST_CASE("exact one-step generator bias for c^2 is V0^2 / N") {
  const std::vector<double> square{0.0, 0.0, 1.0};
  const Polynomial phi(square);
  double previous = INFINITY;
  for (std::int64_t n : {10000, 1000000}) {
    const ModelParams p = kParams.with_population(n);
    const double c = 0.2;
    const double exact = oracle::discrete_generator_exact(
        square, c, regression_one_step_binary(c, p), rfi_binary(c, p), n);
    const double bias = exact - generator_apply(phi, c, p);
    const double v0 = rfi_binary(c, p);
    CHECK(bias == doctest::Approx(v0 * v0 / static_cast<double>(n)).epsilon(1e-3));
    CHECK(std::abs(bias) < previous / 50.0);
    previous = std::abs(bias);
  }
}

TEST_CASE("generator Monte Carlo resolves the bias for c^4") {
  const std::vector<double> quartic{0.0, 0.0, 0.0, 0.0, 1.0};
  const Polynomial phi(quartic);
  const int m = 1000000;
  double discrepancy[2];
  int j = 0;
  for (std::int64_t n : {100, 10000}) {
    const ModelParams p = kParams.with_population(n);
    RngStream rng(4040, static_cast<std::uint64_t>(n));
    const GeneratorCheck g = generator_consistency_check(0.2, p, phi, m, rng);
    const double exact = oracle::discrete_generator_exact(
        quartic, g.state, regression_one_step_binary(g.state, p),
        rfi_binary(g.state, p), n);
    // The estimator is unbiased for the discrete one-step quantity.
    CHECK(std::abs(g.mc_estimate - exact) < 4.0 * g.standard_error);
    discrepancy[j++] = std::abs(g.mc_estimate - g.exact);
  }
  CHECK(discrepancy[1] < discrepancy[0]);
}
