#pragma once

// Exact simulation of statistical experiments at agent resolution.
//
// Given the current state, the N agents are conditionally independent and
// identically distributed, so the number of +1 samples at the next stage is
// a single Binomial(N, V+(p)) draw. One draw per step reproduces the law of
// the full agent system.

#include <cstdint>
#include <vector>

#include "twoeq/model.hpp"
#include "twoeq/rng.hpp"
#include "twoeq/trajectory.hpp"

namespace twoeq {

/// A state on the N-lattice, stored as the count of +1 samples.
class ExperimentState {
 public:
  ExperimentState(Representation mode, std::int64_t count,
                  std::int64_t population, std::int64_t step = 0);

  /// Nearest lattice point to `value`; ties round toward the interior.
  static ExperimentState snapped(Representation mode, double value,
                                 std::int64_t population);

  Representation mode() const noexcept { return mode_; }
  std::int64_t count() const noexcept { return count_; }
  std::int64_t population() const noexcept { return population_; }
  std::int64_t step() const noexcept { return step_; }

  /// Frequency of +1 samples, count / N.
  double frequency() const noexcept;
  /// Value in the state's own representation.
  double value() const noexcept;

 private:
  Representation mode_;
  std::int64_t count_;
  std::int64_t population_;
  std::int64_t step_;
};

/// new_state - old_state = drift_used + martingale_increment.
struct StepOutcome {
  ExperimentState new_state;
  double martingale_increment;
  double drift_used;
};

/// Success probability of each agent at a lattice state. Equal to V+(p) in
/// frequency form and to (1 + V(c)) / 2 in binary form; both are computed
/// from the +1 frequency so the two representations share identical draws.
double success_probability(const ExperimentState& state,
                           const ModelParams& params);

StepOutcome step_frequency(const ExperimentState& state,
                           const ModelParams& params, RngStream& rng);
StepOutcome step_binary(const ExperimentState& state,
                        const ModelParams& params, RngStream& rng);
StepOutcome step(const ExperimentState& state, const ModelParams& params,
                 RngStream& rng);

struct SimConfig {
  Representation mode = Representation::frequency;
  double initial = 0.5;
  std::int64_t steps = 1000;
  bool record_increments = false;
};

struct Simulation {
  Trajectory trajectory;
  std::vector<double> increments;  // filled when record_increments is set
  ExperimentState terminal;
};

/// Runs `config.steps` exact binomial steps from the lattice-snapped
/// initial value.
Simulation simulate(const SimConfig& config, const ModelParams& params,
                    RngStream& rng);

struct MomentCheck {
  double mean = 0.0;               // sample mean of the increments
  double second_moment = 0.0;      // sample mean of squared increments
  double variance = 0.0;           // unbiased sample variance
  double expected_variance = 0.0;  // conditional variance from the model
  double z_mean = 0.0;
  double z_variance = 0.0;
  std::int64_t replicates = 0;
  double state = 0.0;              // lattice-snapped conditioning state
};

/// One-step martingale increments drawn `replicates` times from a fixed
/// conditioning state. z-scores use binomial-exact standard errors.
MomentCheck martingale_moment_check(double state_value, Representation mode,
                                    const ModelParams& params,
                                    std::int64_t replicates, RngStream& rng);

}  // namespace twoeq
