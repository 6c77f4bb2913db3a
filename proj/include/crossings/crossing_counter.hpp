// Sampled smooth-plus-jump paths and the level-crossing functionals evaluated on them.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "crossings/jump_processes.hpp"

namespace crossings {

struct JumpEvent {
  double time;
  double left;   ///< X(time-)
  double right;  ///< X(time)
};

/// A path sampled on the uniform grid t_i = i * step, i = 0..n, with n * step = horizon,
/// plus exact jump records. The grid stores right values; between jumps the samples come
/// from a C^1 path.
struct HybridPath {
  double step = 0.0;
  std::vector<double> values;
  std::vector<JumpEvent> jumps;  ///< sorted by time, times in (0, horizon]

  [[nodiscard]] double horizon() const noexcept { return step * static_cast<double>(values.empty() ? 0 : values.size() - 1); }
  [[nodiscard]] double time(std::size_t i) const noexcept { return step * static_cast<double>(i); }
};

struct CrossingCounts {
  std::int64_t cont_up = 0;
  std::int64_t cont_down = 0;
  std::int64_t disc_up = 0;
  std::int64_t disc_down = 0;

  [[nodiscard]] std::int64_t up() const noexcept { return cont_up + disc_up; }
  [[nodiscard]] std::int64_t down() const noexcept { return cont_down + disc_down; }
  [[nodiscard]] std::int64_t continuous() const noexcept { return cont_up + cont_down; }
  [[nodiscard]] std::int64_t discontinuous() const noexcept { return disc_up + disc_down; }
  [[nodiscard]] std::int64_t total() const noexcept { return continuous() + discontinuous(); }
  friend bool operator==(const CrossingCounts&, const CrossingCounts&) = default;
};

/// Continuous crossings are strict sign changes of X - u between consecutive samples of
/// one inter-jump segment (the post-jump value opens a segment, the pre-jump value closes
/// it). A sample exactly at u takes the sign of the next nonzero deviation in its segment,
/// or the previous one at the end of a segment. Discontinuous crossings are jumps with
/// (X(tau-) - u)(X(tau) - u) < 0.
[[nodiscard]] CrossingCounts count_crossings(const HybridPath& path, double level);

/// max over grid values and both sides of every jump.
[[nodiscard]] double path_max(const HybridPath& path);

/// Lebesgue measure of {t : |X(t) - u| < delta}, X linearly interpolated within segments.
[[nodiscard]] double occupation_time(const HybridPath& path, double level, double delta);

/// cpp_disc_rate_integral evaluated on a hybrid path: trapezoidal rule over every segment,
/// using the exact left limits at jump times.
[[nodiscard]] double cpp_disc_rate_integral(const HybridPath& path, double level, double lambda, Direction direction);

/// Time-ordered samples (t, X) of one inter-jump segment.
struct PathSample {
  double t;
  double x;
};

/// Invokes fn(std::span<const PathSample>) once per inter-jump segment, in time order.
void for_each_segment(const HybridPath& path, const std::function<void(std::span<const PathSample>)>& fn);

/// Builds X = Z + J from a smooth grid sample and a jump path; smooth_at(t) evaluates Z off the grid.
[[nodiscard]] HybridPath combine_paths(std::span<const double> smooth_grid, double step, const JumpPath& jumps,
                                       const std::function<double(double)>& smooth_at);

}  // namespace crossings
