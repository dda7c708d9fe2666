#include "twoeq/rng.hpp"

#include <cmath>

#include "twoeq/errors.hpp"

namespace twoeq {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

std::int64_t binomial_inversion(std::int64_t n, double p, RngStream& rng) {
  const double q = 1.0 - p;
  const double s = p / q;
  const double a = static_cast<double>(n + 1) * s;
  const double r0 = std::pow(q, static_cast<double>(n));
  for (;;) {
    double r = r0;
    double u = rng.uniform();
    std::int64_t x = 0;
    while (u > r) {
      u -= r;
      ++x;
      if (x > n) break;
      r *= a / static_cast<double>(x) - s;
    }
    if (x <= n) return x;
  }
}

// BTRD, W. Hormann (1993), "The generation of binomial random variates",
// J. Statist. Comput. Simul. 46, 101-110. Requires p <= 1/2 and n*p >= 10.
std::int64_t binomial_btrd(std::int64_t n, double p, RngStream& rng) {
  const double nd = static_cast<double>(n);
  const double spq = std::sqrt(nd * p * (1.0 - p));
  const double b = 1.15 + 2.53 * spq;
  const double a = -0.0873 + 0.0248 * b + 0.01 * p;
  const double c = nd * p + 0.5;
  const double alpha = (2.83 + 5.1 / b) * spq;
  const double v_r = 0.92 - 4.2 / b;
  const double u_rv_r = 0.86 * v_r;
  const double r = p / (1.0 - p);
  const double nr = (nd + 1.0) * r;
  const double npq = nd * p * (1.0 - p);
  const auto m = static_cast<std::int64_t>(std::floor((nd + 1.0) * p));
  const double log_fm =
      std::lgamma(static_cast<double>(m) + 1.0) +
      std::lgamma(nd - static_cast<double>(m) + 1.0);

  for (;;) {
    double v = rng.uniform();
    double u;
    if (v <= u_rv_r) {
      u = v / v_r - 0.43;
      return static_cast<std::int64_t>(
          std::floor((2.0 * a / (0.5 - std::abs(u)) + b) * u + c));
    }
    if (v >= v_r) {
      u = rng.uniform() - 0.5;
    } else {
      u = v / v_r - 0.93;
      u = std::copysign(0.5, u) - u;
      v = rng.uniform() * v_r;
    }

    const double us = 0.5 - std::abs(u);
    const double kd = std::floor((2.0 * a / us + b) * u + c);
    if (kd < 0.0 || kd > nd) continue;
    const auto k = static_cast<std::int64_t>(kd);
    v = v * alpha / (a / (us * us) + b);
    const std::int64_t km = k > m ? k - m : m - k;

    if (km <= 15) {
      // Recursive evaluation of f(k)/f(m).
      double f = 1.0;
      if (m < k) {
        for (std::int64_t i = m + 1; i <= k; ++i) {
          f *= nr / static_cast<double>(i) - r;
        }
      } else if (m > k) {
        for (std::int64_t i = k + 1; i <= m; ++i) {
          v *= nr / static_cast<double>(i) - r;
        }
      }
      if (v <= f) return k;
      continue;
    }

    // Squeeze on log scale, then exact log-ratio.
    v = std::log(v);
    const double kmd = static_cast<double>(km);
    const double rho =
        (kmd / npq) * (((kmd / 3.0 + 0.625) * kmd + 1.0 / 6.0) / npq + 0.5);
    const double t = -kmd * kmd / (2.0 * npq);
    if (v < t - rho) return k;
    if (v > t + rho) continue;
    const double log_ratio = log_fm - std::lgamma(kd + 1.0) -
                             std::lgamma(nd - kd + 1.0) +
                             (kd - static_cast<double>(m)) * std::log(r);
    if (v <= log_ratio) return k;
  }
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  std::uint64_t mixer = seed;
  std::uint64_t base = splitmix64(mixer);
  std::uint64_t stream_mixer = stream_id ^ 0x6A09E667F3BCC909ULL;
  std::uint64_t sm = base ^ splitmix64(stream_mixer);
  for (auto& word : state_) word = splitmix64(sm);
  if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
}

RngStream::result_type RngStream::operator()() noexcept {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RngStream::uniform() noexcept {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_open() noexcept {
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() noexcept {
  if (spare_normal_) {
    const double out = *spare_normal_;
    spare_normal_.reset();
    return out;
  }
  double x, y, s;
  do {
    x = 2.0 * uniform() - 1.0;
    y = 2.0 * uniform() - 1.0;
    s = x * x + y * y;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = y * scale;
  return x * scale;
}

std::int64_t binomial_sample(std::int64_t n, double prob, RngStream& rng) {
  if (n < 0) throw DomainError("binomial count must be >= 0");
  if (!(prob >= 0.0 && prob <= 1.0)) {
    throw DomainError("binomial probability must lie in [0,1]");
  }
  if (n == 0 || prob == 0.0) return 0;
  if (prob == 1.0) return n;
  const bool flipped = prob > 0.5;
  const double p = flipped ? 1.0 - prob : prob;
  const std::int64_t draw = static_cast<double>(n) * p < 10.0
                                ? binomial_inversion(n, p, rng)
                                : binomial_btrd(n, p, rng);
  return flipped ? n - draw : draw;
}

}  // namespace twoeq
