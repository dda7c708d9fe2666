#include "twoeq/sde.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "twoeq/errors.hpp"

namespace twoeq {

ExperimentState::ExperimentState(Representation mode, std::int64_t count,
                                 std::int64_t population, std::int64_t step)
    : mode_(mode), count_(count), population_(population), step_(step) {
  if (population_ < 1) throw ValidationError("population N must be >= 1");
  if (count_ < 0 || count_ > population_) {
    std::ostringstream os;
    os << "lattice count " << count_ << " is outside [0," << population_
       << "]";
    throw DomainError(os.str());
  }
}

ExperimentState ExperimentState::snapped(Representation mode, double value,
                                         std::int64_t population) {
  const double p = mode == Representation::frequency ? value
                                                     : 0.5 * (1.0 + value);
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream os;
    os << "initial value " << value << " is outside the "
       << to_string(mode) << " domain";
    throw DomainError(os.str());
  }
  const double n = static_cast<double>(population);
  const double x = p * n;
  double j = std::floor(x);
  const double frac = x - j;
  if (frac > 0.5 || (frac == 0.5 && x < 0.5 * n)) j += 1.0;
  j = std::min(std::max(j, 0.0), n);
  return ExperimentState(mode, static_cast<std::int64_t>(j), population);
}

double ExperimentState::frequency() const noexcept {
  return static_cast<double>(count_) / static_cast<double>(population_);
}

double ExperimentState::value() const noexcept {
  if (mode_ == Representation::frequency) return frequency();
  return -1.0 + 2.0 * static_cast<double>(count_) /
                    static_cast<double>(population_);
}

double success_probability(const ExperimentState& state,
                           const ModelParams& params) {
  return regression_one_step_frequency(state.frequency(), params);
}

StepOutcome step_frequency(const ExperimentState& state,
                           const ModelParams& params, RngStream& rng) {
  if (state.mode() != Representation::frequency) {
    throw ValidationError("step_frequency requires a frequency state");
  }
  const double p = state.frequency();
  const double prob = success_probability(state, params);
  const std::int64_t successes =
      binomial_sample(state.population(), prob, rng);
  ExperimentState next(Representation::frequency, successes,
                       state.population(), state.step() + 1);
  return StepOutcome{next, next.frequency() - prob,
                     rfi_frequency_plus(p, params)};
}

StepOutcome step_binary(const ExperimentState& state,
                        const ModelParams& params, RngStream& rng) {
  if (state.mode() != Representation::binary) {
    throw ValidationError("step_binary requires a binary state");
  }
  const double c = state.value();
  const double prob = success_probability(state, params);
  const std::int64_t successes =
      binomial_sample(state.population(), prob, rng);
  ExperimentState next(Representation::binary, successes, state.population(),
                       state.step() + 1);
  return StepOutcome{next, next.value() - regression_one_step_binary(c, params),
                     -rfi_binary(c, params)};
}

StepOutcome step(const ExperimentState& state, const ModelParams& params,
                 RngStream& rng) {
  return state.mode() == Representation::frequency
             ? step_frequency(state, params, rng)
             : step_binary(state, params, rng);
}

Simulation simulate(const SimConfig& config, const ModelParams& params,
                    RngStream& rng) {
  if (config.steps < 0) throw ValidationError("steps must be >= 0");
  ExperimentState state =
      ExperimentState::snapped(config.mode, config.initial,
                               params.population());
  TrajectoryRecorder recorder;
  recorder.record(0.0, state.value());
  std::vector<double> increments;
  if (config.record_increments) {
    increments.reserve(static_cast<std::size_t>(config.steps));
  }
  for (std::int64_t k = 0; k < config.steps; ++k) {
    const StepOutcome out = step(state, params, rng);
    state = out.new_state;
    recorder.record(static_cast<double>(k + 1), state.value());
    if (config.record_increments) {
      increments.push_back(out.martingale_increment);
    }
  }
  Trajectory traj{TrajectoryMode::stochastic, std::move(recorder).finish(),
                  rng.seed(), params};
  return Simulation{std::move(traj), std::move(increments), state};
}

MomentCheck martingale_moment_check(double state_value, Representation mode,
                                    const ModelParams& params,
                                    std::int64_t replicates, RngStream& rng) {
  if (replicates < 100) throw ValidationError("replicates must be >= 100");
  const ExperimentState state =
      ExperimentState::snapped(mode, state_value, params.population());

  const double n = static_cast<double>(params.population());
  const double m = static_cast<double>(replicates);
  const double prob = success_probability(state, params);
  const double pq = prob * (1.0 - prob);
  // Increment = scale * (nu - N prob) / N with scale 1 (frequency) or 2.
  const double scale = mode == Representation::frequency ? 1.0 : 2.0;

  std::vector<double> draws(static_cast<std::size_t>(replicates));
  double sum = 0.0;
  double sum_sq = 0.0;
  for (auto& d : draws) {
    d = step(state, params, rng).martingale_increment;
    sum += d;
    sum_sq += d * d;
  }
  MomentCheck out;
  out.replicates = replicates;
  out.state = state.value();
  out.mean = sum / m;
  out.second_moment = sum_sq / m;
  double centered = 0.0;
  for (double d : draws) centered += (d - out.mean) * (d - out.mean);
  out.variance = centered / (m - 1.0);

  if (mode == Representation::frequency) {
    const double p = state.frequency();
    out.expected_variance = noise_variance_frequency(p, 1.0 - p, params) / n;
  } else {
    out.expected_variance = noise_variance_binary(state.value(), params) / n;
  }

  // Binomial central moments of the count: n pq and n pq (1 + 3(n-2) pq).
  const double s4 = std::pow(scale / n, 4.0);
  const double mu4 = s4 * n * pq * (1.0 + 3.0 * (n - 2.0) * pq);
  const double var_exact = scale * scale * pq / n;
  const double se_mean = std::sqrt(var_exact / m);
  const double se_var = std::sqrt(std::max(0.0, mu4 - var_exact * var_exact) / m);
  out.z_mean = se_mean > 0.0 ? out.mean / se_mean : 0.0;
  out.z_variance =
      se_var > 0.0 ? (out.variance - out.expected_variance) / se_var : 0.0;
  return out;
}

}  // namespace twoeq
