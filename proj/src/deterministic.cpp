#include "twoeq/deterministic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "twoeq/errors.hpp"

namespace twoeq {

namespace {

constexpr double kLimitMatchTolerance = 1e-6;

Evolution iterate(double x0, Representation rep, const ModelParams& params,
                  std::int64_t max_steps, double tol) {
  if (max_steps < 1) throw ValidationError("max_steps must be >= 1");
  if (!(tol > 0.0)) throw ValidationError("tolerance must be > 0");
  const double lo = domain_lower(rep);
  const double hi = domain_upper(rep);
  if (!(x0 >= lo && x0 <= hi)) {
    std::ostringstream os;
    os << "initial state " << x0 << " is outside [" << lo << "," << hi << "]";
    throw DomainError(os.str());
  }

  TrajectoryRecorder recorder;
  double x = x0;
  recorder.record(0.0, x);

  LimitReport report;
  std::int64_t k = 0;
  double increment = drift(x, rep, params);
  for (; k < max_steps; ++k) {
    if (std::abs(increment) < tol) {
      report.converged = true;
      break;
    }
    const double next = x + increment;
    if (next < lo || next > hi) {
      throw ConstraintError("deterministic evolution left its domain");
    }
    x = next;
    recorder.record(static_cast<double>(k + 1), x);
    increment = drift(x, rep, params);
  }
  if (!report.converged && std::abs(increment) < tol) report.converged = true;

  report.limit_value = x;
  report.steps_used = k;
  report.residual = std::abs(increment);
  report.limit_kind = classify_zone(x, rep, params, kLimitKindTolerance);

  Evolution out{Trajectory{rep == Representation::frequency
                               ? TrajectoryMode::frequency
                               : TrajectoryMode::binary,
                           std::move(recorder).finish(), std::nullopt, params},
                report};
  return out;
}

bool is_monotone_towards(const std::vector<TrajectoryPoint>& points,
                         double target) {
  if (points.size() < 2) return true;
  const double direction = target - points.front().value;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double step = points[i].value - points[i - 1].value;
    if (direction > 0 && step < 0) return false;
    if (direction < 0 && step > 0) return false;
    if (direction == 0 && step != 0) return false;
  }
  return true;
}

}  // namespace

Evolution evolve_frequency(double p0, const ModelParams& params,
                           std::int64_t max_steps, double tol) {
  return iterate(p0, Representation::frequency, params, max_steps, tol);
}

Evolution evolve_binary(double c0, const ModelParams& params,
                        std::int64_t max_steps, double tol) {
  return iterate(c0, Representation::binary, params, max_steps, tol);
}

Evolution evolve(double initial, Representation rep, const ModelParams& params,
                 std::int64_t max_steps, double tol) {
  return iterate(initial, rep, params, max_steps, tol);
}

double predict_limit(double initial, Representation rep,
                     const ModelParams& params) {
  const bool freq = rep == Representation::frequency;
  switch (classify_zone(initial, rep, params)) {
    case ZoneLabel::AtAbsorbingBoundary:
    case ZoneLabel::AtEquilibriumPlus:
    case ZoneLabel::AtEquilibriumMinus:
      return initial;
    case ZoneLabel::LeftRepulsiveZone:
      return freq ? 0.0 : -1.0;
    case ZoneLabel::MidAttractiveZone:
    case ZoneLabel::RightAttractiveZone:
      return freq ? params.pi_plus() : params.gap();
  }
  return initial;
}

bool ConsistencyReport::all_passed() const noexcept {
  return failures() == 0;
}

std::size_t ConsistencyReport::failures() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(points.begin(), points.end(),
                    [](const ConsistencyPoint& p) { return !p.passed(); }));
}

ConsistencyReport consistency_check_theorem(const ModelParams& params,
                                            int grid_size,
                                            Representation rep) {
  if (grid_size < 10) throw ValidationError("grid_size must be >= 10");
  ConsistencyReport report;
  report.representation = rep;
  report.points.reserve(static_cast<std::size_t>(grid_size));
  const double lo = domain_lower(rep);
  const double width = domain_upper(rep) - lo;
  for (int i = 0; i < grid_size; ++i) {
    ConsistencyPoint point;
    point.initial = lo + width * i / (grid_size - 1);
    point.predicted = predict_limit(point.initial, rep, params);
    const Evolution ev = evolve(point.initial, rep, params);
    point.observed = ev.report.limit_value;
    point.limit_matches =
        ev.report.converged &&
        std::abs(point.observed - point.predicted) <= kLimitMatchTolerance;
    point.monotone = is_monotone_towards(ev.trajectory.points, point.predicted);
    report.points.push_back(point);
  }
  return report;
}

}  // namespace twoeq
