#pragma once

// Closed-form pieces of the two-equilibrium regression model.
//
// Frequency representation: p in [0,1] is the share of +1 samples.
// Binary representation:    c = 2p - 1 in [-1,1].
//
// The increment (regression) function in frequency form is the quartic
//   V+(p) = -V p (1-p) (p - pi_minus) (p - pi_plus)
// with absorbing roots {0,1}, a repulsive root pi_minus and an attractive
// root pi_plus. In binary form the negated drift is
//   V0(c) = (V/8) (1-c^2) (c-pi) (c+pi),   pi = pi_plus - pi_minus,
// so that one deterministic step is c -> c - V0(c).

#include <cstdint>
#include <string_view>

namespace twoeq {

enum class Representation { frequency, binary };

enum class Sign { plus, minus };

enum class ZoneLabel {
  LeftRepulsiveZone,
  MidAttractiveZone,
  RightAttractiveZone,
  AtEquilibriumPlus,
  AtEquilibriumMinus,
  AtAbsorbingBoundary,
};

std::string_view to_string(ZoneLabel zone);
std::string_view to_string(Representation rep);
Representation parse_representation(std::string_view text);

inline constexpr double kIdentityTolerance = 1e-12;
inline constexpr double kZoneTolerance = 1e-12;

/// Immutable model parameterization. Construction validates every
/// invariant, including that the amplitude keeps the one-step regression
/// functions inside [0,1].
class ModelParams {
 public:
  /// From the attractive equilibrium; pi_minus = 1 - pi_plus.
  static ModelParams from_pi_plus(double pi_plus, double amplitude,
                                  std::int64_t population);
  /// From the gap pi = pi_plus - pi_minus.
  static ModelParams from_gap(double gap, double amplitude,
                              std::int64_t population);

  double pi_plus() const noexcept { return pi_plus_; }
  double pi_minus() const noexcept { return pi_minus_; }
  double gap() const noexcept { return gap_; }
  double amplitude() const noexcept { return amplitude_; }
  std::int64_t population() const noexcept { return population_; }

  /// Same equilibria and amplitude, different agent count.
  ModelParams with_population(std::int64_t population) const;

 private:
  ModelParams(double pi_plus, double pi_minus, double gap, double amplitude,
              std::int64_t population);

  double pi_plus_;
  double pi_minus_;
  double gap_;
  double amplitude_;
  std::int64_t population_;
};

// Frequency drift functions.
double rfi_frequency_plus(double p, const ModelParams& params);
double rfi_frequency_minus(double p_minus, const ModelParams& params);

// Binary negated drift V0(c); the binary increment is -V0(c).
double rfi_binary(double c, const ModelParams& params);

// One-step regression functions (conditional means of the next state).
double regression_one_step_frequency(double p, const ModelParams& params);
double regression_one_step_frequency_minus(double p_minus,
                                           const ModelParams& params);
double regression_one_step_binary(double c, const ModelParams& params);

// Conditional variances of a single sample value.
double noise_variance_binary(double c, const ModelParams& params);
double noise_variance_frequency(double p_plus, double p_minus,
                                const ModelParams& params);

/// Lambda+(c) = (V/8)(1-c^2)(c+pi), Lambda-(c) = (V/8)(1-c^2)(c-pi).
/// V0(c)(c-pi) = Lambda+(c)(c-pi)^2 and V0(c)(c+pi) = Lambda-(c)(c+pi)^2.
double classifier_lambda(double c, Sign sign, const ModelParams& params);

ZoneLabel classify_zone(double state, Representation rep,
                        const ModelParams& params,
                        double tol = kZoneTolerance);

/// Deterministic drift in the given representation: V+(x) or -V0(x).
double drift(double state, Representation rep, const ModelParams& params);

/// Domain bounds of a representation.
double domain_lower(Representation rep) noexcept;
inline constexpr double domain_upper(Representation) noexcept { return 1.0; }

}  // namespace twoeq
