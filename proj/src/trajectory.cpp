#include "twoeq/trajectory.hpp"

#include <algorithm>

namespace twoeq {

std::string_view to_string(TrajectoryMode mode) {
  switch (mode) {
    case TrajectoryMode::frequency: return "frequency";
    case TrajectoryMode::binary: return "binary";
    case TrajectoryMode::sa: return "sa";
    case TrajectoryMode::stochastic: return "stochastic";
    case TrajectoryMode::diffusion: return "diffusion";
  }
  return "unknown";
}

TrajectoryRecorder::TrajectoryRecorder(std::size_t capacity)
    : capacity_(std::max<std::size_t>(capacity, 2)) {
  points_.reserve(std::min<std::size_t>(capacity_, 4096));
}

void TrajectoryRecorder::record(double index, double value) {
  last_ = TrajectoryPoint{index, value};
  if (seen_++ % stride_ != 0) return;
  points_.push_back(*last_);
  if (points_.size() < capacity_) return;
  // Keep points whose ordinal is a multiple of the doubled stride.
  std::size_t kept = 0;
  for (std::size_t i = 0; i < points_.size(); i += 2) {
    points_[kept++] = points_[i];
  }
  points_.resize(kept);
  stride_ *= 2;
}

std::vector<TrajectoryPoint> TrajectoryRecorder::finish() && {
  if (last_ && (points_.empty() || points_.back().index != last_->index)) {
    points_.push_back(*last_);
  }
  return std::move(points_);
}

}  // namespace twoeq
