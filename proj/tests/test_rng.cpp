#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "twoeq/ensemble.hpp"
#include "twoeq/errors.hpp"
#include "twoeq/limits.hpp"
#include "twoeq/rng.hpp"

using namespace twoeq;

namespace {

// Pearson chi-square of `draws` Binomial(n, p) samples against the exact pmf.
// Cells with expected count below 5 are pooled into their neighbours.
struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
};

ChiSquare binomial_chi_square(std::int64_t n, double p, int draws,
                              std::uint64_t seed) {
  RngStream rng(seed, 0);
  std::vector<double> observed(static_cast<std::size_t>(n) + 1, 0.0);
  for (int i = 0; i < draws; ++i) {
    const std::int64_t k = binomial_sample(n, p, rng);
    REQUIRE(k >= 0);
    REQUIRE(k <= n);
    observed[static_cast<std::size_t>(k)] += 1.0;
  }
  std::vector<double> cell_obs;
  std::vector<double> cell_exp;
  double obs_acc = 0.0;
  double exp_acc = 0.0;
  for (std::int64_t k = 0; k <= n; ++k) {
    obs_acc += observed[static_cast<std::size_t>(k)];
    exp_acc += draws * oracle::binomial_pmf(n, k, p);
    if (exp_acc >= 5.0) {
      cell_obs.push_back(obs_acc);
      cell_exp.push_back(exp_acc);
      obs_acc = 0.0;
      exp_acc = 0.0;
    }
  }
  if (!cell_obs.empty()) {
    cell_obs.back() += obs_acc;
    cell_exp.back() += exp_acc;
  }
  ChiSquare out;
  for (std::size_t i = 0; i < cell_obs.size(); ++i) {
    const double d = cell_obs[i] - cell_exp[i];
    out.statistic += d * d / cell_exp[i];
  }
  const int cells = static_cast<int>(cell_obs.size());
  out.dof = cells - 1;
  return out;
}

}  // namespace

TEST_CASE("streams are reproducible and distinct") {
  RngStream a(42, 3);
  RngStream b(42, 3);
  RngStream c(42, 4);
  RngStream d(43, 3);
  bool differs_c = false;
  bool differs_d = false;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a();
    CHECK(x == b());
    differs_c |= x != c();
    differs_d |= x != d();
  }
  CHECK(differs_c);
  CHECK(differs_d);
  CHECK(a.seed() == 42);
  CHECK(a.stream_id() == 3);
}

TEST_CASE("uniform draws lie in range with the right moments") {
  RngStream rng(7);
  const int m = 200000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < m; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    const double v = rng.uniform_open();
    REQUIRE(v > 0.0);
    REQUIRE(v < 1.0);
    sum += u;
    sum_sq += u * u;
  }
  const double mean = sum / m;
  CHECK(std::abs(mean - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / m));
  CHECK(std::abs(sum_sq / m - 1.0 / 3.0) < 0.005);
}

TEST_CASE("normal draws match the standard normal law") {
  RngStream rng(11);
  const int m = 100000;
  std::vector<double> xs(m);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (auto& x : xs) {
    x = rng.normal();
    sum += x;
    sum_sq += x * x;
  }
  CHECK(std::abs(sum / m) < 4.0 / std::sqrt(m));
  CHECK(std::abs(sum_sq / m - 1.0) < 4.0 * std::sqrt(2.0 / m));
  // 1.63/sqrt(M) is the 1% critical value of the one-sample KS statistic.
  const double ks = ks_statistic_one_sample(xs, normal_cdf);
  CHECK(ks < 1.63 / std::sqrt(m));
}

TEST_CASE("binomial degenerate cases") {
  RngStream rng(1);
  for (std::int64_t n : {0, 1, 17, 1000000}) {
    CHECK(binomial_sample(n, 0.0, rng) == 0);
    CHECK(binomial_sample(n, 1.0, rng) == n);
  }
  CHECK(binomial_sample(0, 0.4, rng) == 0);
  CHECK_THROWS_AS(binomial_sample(-1, 0.5, rng), DomainError);
  CHECK_THROWS_AS(binomial_sample(10, 1.5, rng), DomainError);
  CHECK_THROWS_AS(binomial_sample(10, std::nan(""), rng), DomainError);
}

TEST_CASE("binomial samples fit the exact pmf") {
  struct Case {
    std::int64_t n;
    double p;
  };
  // Covers the inversion branch, the rejection branch and the p > 1/2 flip.
  for (const Case c : {Case{1, 0.3}, Case{20, 0.3}, Case{60, 0.1}, Case{1000, 0.4},
                       Case{1000, 0.51}, Case{100, 0.95}, Case{10000, 0.02},
                       Case{100000, 0.5}}) {
    CAPTURE(c.n);
    CAPTURE(c.p);
    const ChiSquare chi = binomial_chi_square(c.n, c.p, 200000, 99 + c.n);
    REQUIRE(chi.dof >= 1);
    // Mean dof, sd sqrt(2 dof): 6 sd is far beyond any plausible fluctuation.
    CHECK(chi.statistic < chi.dof + 6.0 * std::sqrt(2.0 * chi.dof));
  }
}

TEST_CASE("binomial mean for a large population") {
  RngStream rng(2026);
  const std::int64_t n = 1000000;
  const double p = 0.3;
  const int draws = 10000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double k = static_cast<double>(binomial_sample(n, p, rng));
    sum += k;
    sum_sq += k * k;
  }
  const double mean = sum / draws;
  const double var = n * p * (1 - p);
  CHECK(std::abs(mean - 3e5) < 4.0 * std::sqrt(var / draws));
  const double sample_var = (sum_sq - draws * mean * mean) / (draws - 1);
  CHECK(std::abs(sample_var / var - 1.0) < 0.06);
}

TEST_CASE("ensembles give identical results for any thread count") {
  auto fn = [](RngStream& rng, std::int64_t i) {
    return static_cast<double>(binomial_sample(1000, 0.3, rng)) + rng.normal() +
           static_cast<double>(i);
  };
  const auto one = run_ensemble(64, 5, fn, 1);
  const auto four = run_ensemble(64, 5, fn, 4);
  CHECK(one == four);
  CHECK(run_ensemble(0, 5, fn).empty());

  auto failing = [](RngStream&, std::int64_t i) -> int {
    if (i == 10) throw ValidationError("boom");
    return 0;
  };
  CHECK_THROWS_AS(run_ensemble(20, 1, failing, 3), ValidationError);
}
