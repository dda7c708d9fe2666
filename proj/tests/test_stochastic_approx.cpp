#include <cmath>

#include "doctest.h"
#include "twoeq/deterministic.hpp"
#include "twoeq/ensemble.hpp"
#include "twoeq/errors.hpp"
#include "twoeq/stochastic_approx.hpp"

using namespace twoeq;

namespace {

const ModelParams kParams = ModelParams::from_gap(0.4, 1.0, 100);

SAConfig quiet(double a, double alpha0 = 0.0) {
  SAConfig cfg;
  cfg.gain = a;
  cfg.alpha0 = alpha0;
  cfg.noise_mode = NoiseMode::none;
  return cfg;
}

}  // namespace

TEST_CASE("gain sequence") {
  CHECK(gain(10, 0.5) == doctest::Approx(0.05));
  CHECK(gain(1, 1.0) == 1.0);
  CHECK_THROWS_AS(gain(0, 1.0), DomainError);
  SAConfig cfg;
  cfg.schedule = GainSchedule::constant;
  cfg.gain = 0.3;
  CHECK(step_size(1000, cfg) == 0.3);
}

TEST_CASE("gain schedule divergence and square summability") {
  const double a = 0.5;
  double partial = 0.0;
  for (std::int64_t k = 1; k <= 1000000; ++k) partial += gain(k, a);
  CHECK(partial > a * std::log(1e6) * 0.99);
  double tail = 0.0;
  for (std::int64_t k = 1000001; k <= 100000000; k += 1) {
    const double g = gain(k, a);
    tail += g * g;
  }
  CHECK(tail < 1e-6 * a * a);
}

TEST_CASE("sa_step fixed points and the zero-noise update") {
  RngStream rng(1);
  for (NoiseMode mode : {NoiseMode::exact_binomial, NoiseMode::gaussian, NoiseMode::none}) {
    SAConfig cfg;
    cfg.noise_mode = mode;
    CHECK(sa_step(1.0, 1, kParams, cfg, rng).alpha == 1.0);
    CHECK(sa_step(-1.0, 1, kParams, cfg, rng).alpha == -1.0);
  }
  const SAStep at_pi = sa_step(0.4, 3, kParams, quiet(0.5), rng);
  CHECK(std::abs(at_pi.alpha - 0.4) < 1e-15);
  const SAStep from_zero = sa_step(0.0, 1, kParams, quiet(1.0), rng);
  CHECK(from_zero.alpha == doctest::Approx(0.02).epsilon(1e-12));
  CHECK_FALSE(from_zero.clamped);
}

TEST_CASE("noise has zero mean and second moment 1/N") {
  for (NoiseMode mode : {NoiseMode::exact_binomial, NoiseMode::gaussian}) {
    CAPTURE(to_string(mode));
    SAConfig cfg;
    cfg.noise_mode = mode;
    cfg.schedule = GainSchedule::constant;
    cfg.gain = 0.01;
    RngStream rng(99);
    const double alpha = 0.2;  // on the N = 100 lattice
    const double pull = -rfi_binary(alpha, kParams);
    const double sigma = std::sqrt(noise_variance_binary(alpha, kParams));
    const int m = 200000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < m; ++i) {
      const SAStep s = sa_step(alpha, 1, kParams, cfg, rng);
      const double xi = ((s.alpha - alpha) / cfg.gain - pull) / sigma;
      sum += xi;
      sum_sq += xi * xi;
    }
    const double v = noise_second_moment(mode, kParams);
    CHECK(v == doctest::Approx(0.01));
    CHECK(std::abs(sum / m) < 4.0 * std::sqrt(v / m));
    CHECK(std::abs(sum_sq / m / v - 1.0) < 4.0 * std::sqrt(2.0 / m) + 0.005);
  }
  CHECK(noise_second_moment(NoiseMode::none, kParams) == 0.0);
}

TEST_CASE("run_sa at the equilibrium without noise stops immediately") {
  RngStream rng(5);
  const SAReport r = run_sa(quiet(0.5, kParams.gap()), kParams, rng);
  CHECK(r.detected_limit == DetectedLimit::pi);
  CHECK(r.steps <= 1);
  CHECK(r.terminal_alpha == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("zero noise with unit constant gain reproduces the binary evolution") {
  SAConfig cfg = quiet(1.0, 0.0);
  cfg.schedule = GainSchedule::constant;
  cfg.max_steps = 5000;
  RngStream rng(1);
  const SAReport sa = run_sa(cfg, kParams, rng);
  const Evolution ev = evolve_binary(0.0, kParams, 5000, 1e-300);
  const auto& a = sa.trajectory.points;
  const auto& b = ev.trajectory.points;
  const std::size_t n = std::min(a.size(), b.size());
  REQUIRE(n > 100);
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(a[i].index == b[i].index);
    CHECK(a[i].value == b[i].value);
  }
}

TEST_CASE("deterministic SA from zero rises monotonically toward pi") {
  SAConfig cfg = quiet(0.5, 0.0);
  cfg.max_steps = 20000;
  RngStream rng(1);
  const SAReport r = run_sa(cfg, kParams, rng);
  const auto& pts = r.trajectory.points;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    CHECK(pts[i].value >= pts[i - 1].value);
    CHECK(pts[i].value < 0.4);
  }
}

TEST_CASE("repulsive start drifts toward -1") {
  SAConfig cfg;
  cfg.alpha0 = -0.8;
  cfg.max_steps = 20000;
  const auto terminals = run_ensemble(20, 8080, [&](RngStream& rng, std::int64_t) {
    return run_sa(cfg, kParams, rng).terminal_alpha;
  });
  int below = 0;
  for (double t : terminals) below += t < -kParams.gap();
  CHECK(below >= 18);
}

TEST_CASE("run_sa bookkeeping") {
  SAConfig cfg;
  cfg.max_steps = 3000;
  RngStream a(12, 0);
  RngStream b(12, 0);
  const SAReport x = run_sa(cfg, kParams, a);
  const SAReport y = run_sa(cfg, kParams, b);
  CHECK(x.terminal_alpha == y.terminal_alpha);
  CHECK(x.steps == 3000);
  CHECK(x.clamped_steps <= x.steps);
  CHECK(x.trajectory.points.size() == 3001);
  CHECK(x.trajectory.mode == TrajectoryMode::sa);
}

TEST_CASE("config validation") {
  RngStream rng(1);
  SAConfig cfg;
  cfg.gain = 0.0;
  CHECK_THROWS_AS(run_sa(cfg, kParams, rng), ValidationError);
  cfg = SAConfig{};
  cfg.alpha0 = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = SAConfig{};
  cfg.convergence_window = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  CHECK_THROWS_AS(parse_noise_mode("loud"), ValidationError);
  CHECK(parse_noise_mode("gaussian") == NoiseMode::gaussian);
}

TEST_CASE("Lyapunov drift at and away from the equilibrium") {
  const SAConfig cfg;
  const LyapunovDrift at = lyapunov_drift(0.4, 10, kParams, cfg, Sign::plus);
  CHECK(std::abs(at.first_order) < 1e-15);
  CHECK(at.total() >= 0.0);
  CHECK(at.second_order > 0.0);

  for (std::int64_t k : {1, 10, 1000, 1000000}) {
    CHECK(lyapunov_drift(0.8, k, kParams, cfg, Sign::plus).first_order < 0.0);
  }
  const LyapunovDrift d1 = lyapunov_drift(0.0, 100, kParams, cfg, Sign::plus);
  const LyapunovDrift d2 = lyapunov_drift(0.0, 100000, kParams, cfg, Sign::plus);
  CHECK(std::abs(d2.second_order / d2.first_order) <
        std::abs(d1.second_order / d1.first_order) / 500.0);

  // Hand evaluation at c = 0, k = 1, a = 0.5, N = 100: V0(0) = -0.02,
  // sigma^2(0) = 1 - 0.02^2, B = 0.02^2 + 0.9996 / 100.
  const LyapunovDrift d = lyapunov_drift(0.0, 1, kParams, cfg, Sign::plus);
  CHECK(d.first_order == doctest::Approx(-2.0 * 0.5 * (-0.02) * (-0.4)));
  CHECK(d.second_order == doctest::Approx(0.25 * (0.0004 + 0.009996)));

  const LyapunovDrift m = lyapunov_drift(-0.8, 1, kParams, cfg, Sign::minus);
  CHECK(m.first_order == doctest::Approx(-2.0 * 0.5 * rfi_binary(-0.8, kParams) * (-0.4)));
}

TEST_CASE("supermartingale onset is the first negative index") {
  const SAConfig cfg;
  for (double c : {-0.35, -0.1, 0.0, 0.3, 0.45, 0.6, 0.9}) {
    CAPTURE(c);
    const std::int64_t k0 = supermartingale_onset(c, kParams, cfg);
    REQUIRE(k0 >= 1);
    CHECK(lyapunov_drift(c, k0, kParams, cfg, Sign::plus).total() < 0.0);
    CHECK(lyapunov_drift(c, k0 * 10, kParams, cfg, Sign::plus).total() < 0.0);
    if (k0 > 1) {
      CHECK(lyapunov_drift(c, k0 - 1, kParams, cfg, Sign::plus).total() >= 0.0);
    }
  }
  CHECK(supermartingale_onset(-0.6, kParams, cfg) == -1);
  CHECK(supermartingale_onset(0.4, kParams, cfg) == -1);
}
