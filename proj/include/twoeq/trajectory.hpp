#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "twoeq/model.hpp"

namespace twoeq {

enum class TrajectoryMode { frequency, binary, sa, stochastic, diffusion };

std::string_view to_string(TrajectoryMode mode);

struct TrajectoryPoint {
  double index;  // step count, or time in model units
  double value;
};

struct Trajectory {
  TrajectoryMode mode = TrajectoryMode::frequency;
  std::vector<TrajectoryPoint> points;
  std::optional<std::uint64_t> seed;
  std::optional<ModelParams> params;

  bool empty() const noexcept { return points.empty(); }
  const TrajectoryPoint& back() const { return points.back(); }
};

/// Bounded-memory trajectory recorder. Every point is kept until the buffer
/// holds `capacity` points; after that the stride doubles and every other
/// stored point is dropped, so the retained points stay evenly spaced.
/// The most recent point is always retained by `finish`.
class TrajectoryRecorder {
 public:
  static constexpr std::size_t kDefaultCapacity = 100000;

  explicit TrajectoryRecorder(std::size_t capacity = kDefaultCapacity);

  void record(double index, double value);
  std::vector<TrajectoryPoint> finish() &&;

  std::size_t stride() const noexcept { return stride_; }

 private:
  std::size_t capacity_;
  std::size_t stride_ = 1;
  std::size_t seen_ = 0;
  std::vector<TrajectoryPoint> points_;
  std::optional<TrajectoryPoint> last_;
};

}  // namespace twoeq
