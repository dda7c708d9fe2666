#pragma once

// Reproducible random streams.
//
// Generator: xoshiro256** (Blackman & Vigna). The 256-bit state of stream
// (seed, stream_id) is filled by SplitMix64 started from a mix of both
// values, so every replicate of an ensemble owns an independent stream and
// identical (seed, stream_id) pairs reproduce identical draws on every
// platform. No standard-library distribution is used; uniforms, normals and
// binomials are all implemented here so outputs are bit-stable.

#include <array>
#include <cstdint>
#include <limits>
#include <optional>

namespace twoeq {

class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  /// Uniform on [0,1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on (0,1).
  double uniform_open() noexcept;
  /// Standard normal (Marsaglia polar method, spare value cached).
  double normal() noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

 private:
  std::array<std::uint64_t, 4> state_{};
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::optional<double> spare_normal_;
};

/// Binomial(n, prob). Sequential inversion when n*min(p,1-p) < 10,
/// otherwise Hormann's BTRD transformed-rejection sampler.
std::int64_t binomial_sample(std::int64_t n, double prob, RngStream& rng);

}  // namespace twoeq
