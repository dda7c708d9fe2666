#pragma once

#include <cstdint>
#include <vector>

#include "twoeq/model.hpp"
#include "twoeq/trajectory.hpp"

namespace twoeq {

inline constexpr double kDefaultEvolveTolerance = 1e-12;
inline constexpr std::int64_t kDefaultEvolveSteps = 1000000;

/// Tolerance used to label a converged limit with a ZoneLabel.
inline constexpr double kLimitKindTolerance = 1e-6;

/// Outcome of iterating the deterministic difference evolution.
struct LimitReport {
  bool converged = false;
  double limit_value = 0.0;
  std::int64_t steps_used = 0;
  ZoneLabel limit_kind = ZoneLabel::MidAttractiveZone;
  double residual = 0.0;  // |increment| at the final state
};

struct Evolution {
  Trajectory trajectory;
  LimitReport report;
};

/// P(k+1) = P(k) + V+(P(k)). Stops as soon as |increment| < tol.
Evolution evolve_frequency(double p0, const ModelParams& params,
                           std::int64_t max_steps = kDefaultEvolveSteps,
                           double tol = kDefaultEvolveTolerance);

/// C(k+1) = C(k) - V0(C(k)). Stops as soon as |increment| < tol.
Evolution evolve_binary(double c0, const ModelParams& params,
                        std::int64_t max_steps = kDefaultEvolveSteps,
                        double tol = kDefaultEvolveTolerance);

Evolution evolve(double initial, Representation rep, const ModelParams& params,
                 std::int64_t max_steps = kDefaultEvolveSteps,
                 double tol = kDefaultEvolveTolerance);

/// Closed-form limit from the zone of the initial state.
double predict_limit(double initial, Representation rep,
                     const ModelParams& params);

struct ConsistencyPoint {
  double initial = 0.0;
  double predicted = 0.0;
  double observed = 0.0;
  bool limit_matches = false;
  bool monotone = false;
  bool passed() const noexcept { return limit_matches && monotone; }
};

struct ConsistencyReport {
  Representation representation = Representation::frequency;
  std::vector<ConsistencyPoint> points;

  bool all_passed() const noexcept;
  std::size_t failures() const noexcept;
};

/// Evolves every point of a uniform grid over the domain and compares the
/// observed limit with `predict_limit`, checking monotone approach.
ConsistencyReport consistency_check_theorem(
    const ModelParams& params, int grid_size,
    Representation rep = Representation::frequency);

}  // namespace twoeq
