#include "crossings/crossing_counter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crossings {

void for_each_segment(const HybridPath& path, const std::function<void(std::span<const PathSample>)>& fn) {
  const std::size_t n = path.values.size();
  if (n == 0) return;
  thread_local std::vector<PathSample> buffer;
  std::size_t i = 0;
  for (std::size_t k = 0; k <= path.jumps.size(); ++k) {
    buffer.clear();
    if (k > 0) {
      const JumpEvent& opened = path.jumps[k - 1];
      buffer.push_back({opened.time, opened.right});
      // A jump on a grid point: the grid already carries the right value.
      if (i < n && path.time(i) == opened.time) ++i;
    }
    const bool last = k == path.jumps.size();
    const double end = last ? 0.0 : path.jumps[k].time;
    while (i < n && (last || path.time(i) < end)) {
      buffer.push_back({path.time(i), path.values[i]});
      ++i;
    }
    if (!last) buffer.push_back({path.jumps[k].time, path.jumps[k].left});
    fn(buffer);
  }
}

CrossingCounts count_crossings(const HybridPath& path, double level) {
  CrossingCounts counts;
  const std::size_t n = path.values.size();
  std::size_t i = 0;
  auto sign_of = [level](double x) { return x > level ? 1 : (x < level ? -1 : 0); };

  // Walks the same segmentation as for_each_segment without materializing samples.
  for (std::size_t k = 0; k <= path.jumps.size(); ++k) {
    int prev = 0;
    auto visit = [&](double x) {
      const int s = sign_of(x);
      if (s == 0) return;
      if (prev < 0 && s > 0) ++counts.cont_up;
      if (prev > 0 && s < 0) ++counts.cont_down;
      prev = s;
    };
    if (k > 0) {
      const JumpEvent& opened = path.jumps[k - 1];
      visit(opened.right);
      if (i < n && path.time(i) == opened.time) ++i;
    }
    const bool last = k == path.jumps.size();
    const double end = last ? 0.0 : path.jumps[k].time;
    while (i < n && (last || path.time(i) < end)) visit(path.values[i++]);
    if (!last) visit(path.jumps[k].left);
  }

  for (const JumpEvent& jump : path.jumps) {
    if ((jump.left - level) * (jump.right - level) < 0.0) {
      if (jump.left < level) {
        ++counts.disc_up;
      } else {
        ++counts.disc_down;
      }
    }
  }
  return counts;
}

double path_max(const HybridPath& path) {
  if (path.values.empty()) throw std::invalid_argument("path_max: empty path");
  double m = *std::max_element(path.values.begin(), path.values.end());
  for (const JumpEvent& jump : path.jumps) m = std::max({m, jump.left, jump.right});
  return m;
}

double occupation_time(const HybridPath& path, double level, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("occupation_time: delta must be > 0");
  const double lo = level - delta;
  const double hi = level + delta;
  double total = 0.0;
  for_each_segment(path, [&](std::span<const PathSample> seg) {
    for (std::size_t j = 0; j + 1 < seg.size(); ++j) {
      const double dt = seg[j + 1].t - seg[j].t;
      if (dt <= 0.0) continue;
      const double xa = seg[j].x;
      const double dx = seg[j + 1].x - xa;
      if (dx == 0.0) {
        if (xa > lo && xa < hi) total += dt;
        continue;
      }
      double s0 = (lo - xa) / dx;
      double s1 = (hi - xa) / dx;
      if (s0 > s1) std::swap(s0, s1);
      const double overlap = std::min(s1, 1.0) - std::max(s0, 0.0);
      if (overlap > 0.0) total += overlap * dt;
    }
  });
  return total;
}

double cpp_disc_rate_integral(const HybridPath& path, double level, double lambda, Direction direction) {
  if (path.values.empty()) throw std::invalid_argument("cpp_disc_rate_integral: empty grid");
  double total = 0.0;
  for_each_segment(path, [&](std::span<const PathSample> seg) {
    for (std::size_t j = 0; j + 1 < seg.size(); ++j) {
      const double dt = seg[j + 1].t - seg[j].t;
      total += 0.5 * dt *
               (cpp_crossing_probability(seg[j].x, level, direction) +
                cpp_crossing_probability(seg[j + 1].x, level, direction));
    }
  });
  return lambda * total;
}

HybridPath combine_paths(std::span<const double> smooth_grid, double step, const JumpPath& jumps,
                         const std::function<double(double)>& smooth_at) {
  HybridPath path;
  path.step = step;
  path.values.assign(smooth_grid.begin(), smooth_grid.end());
  std::size_t k = 0;
  for (std::size_t i = 0; i < path.values.size(); ++i) {
    const double t = path.time(i);
    while (k < jumps.times.size() && jumps.times[k] <= t) ++k;
    path.values[i] += k == 0 ? jumps.initial : jumps.values[k - 1];
  }
  path.jumps.reserve(jumps.times.size());
  for (std::size_t j = 0; j < jumps.times.size(); ++j) {
    const double z = smooth_at(jumps.times[j]);
    path.jumps.push_back({jumps.times[j], z + jumps.left_limit(j), z + jumps.values[j]});
  }
  return path;
}

}  // namespace crossings
