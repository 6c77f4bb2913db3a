#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "crossings/crossing_counter.hpp"
#include "crossings/gaussian_process.hpp"
#include "crossings/jump_processes.hpp"
#include "crossings/numeric.hpp"

using namespace crossings;

namespace {

HybridPath sampled(double step, std::size_t intervals, const std::function<double(double)>& f) {
  HybridPath p;
  p.step = step;
  for (std::size_t i = 0; i <= intervals; ++i) p.values.push_back(f(step * static_cast<double>(i)));
  return p;
}

// Smooth two-atom Gaussian path plus a CPP on a grid of the given step.
HybridPath random_path(std::uint64_t seed, double step) {
  const SpectralModel model({{0.5, 1.0}, {0.5, 2.0}});
  Rng zr(seed);
  Rng jr(seed + 1000003);
  const HarmonicRealization z(model, zr);
  const HarmonicGrid grid(model, 1.0, step);
  std::vector<double> v(grid.size());
  grid.values(z, v);
  const JumpPath j = sample_cpp(1.0, 1.0, jr);
  return combine_paths(v, step, j, [&z](double t) { return z.value(t); });
}

}  // namespace

TEST(CountCrossings, Ramp) {
  const HybridPath p = sampled(1e-3, 1000, [](double t) { return 2.0 * t - 1.0; });
  EXPECT_EQ(count_crossings(p, 0.0), (CrossingCounts{1, 0, 0, 0}));
}

TEST(CountCrossings, SingleUpwardJump) {
  HybridPath p;
  p.step = 0.25;
  p.values = {-1.0, -1.0, 1.0, 1.0, 1.0};
  p.jumps = {{0.5, -1.0, 1.0}};
  EXPECT_EQ(count_crossings(p, 0.0), (CrossingCounts{0, 0, 1, 0}));
}

TEST(CountCrossings, JumpBetweenGridPoints) {
  HybridPath p;
  p.step = 0.25;
  p.values = {-1.0, -1.0, -1.0, 1.0, 1.0};
  p.jumps = {{0.6, -1.0, 1.0}};
  EXPECT_EQ(count_crossings(p, 0.0), (CrossingCounts{0, 0, 1, 0}));
  // A jump that stays on one side is not a crossing.
  p.jumps = {{0.6, -1.0, -0.5}};
  p.values = {-1.0, -1.0, -1.0, -0.5, -0.5};
  EXPECT_EQ(count_crossings(p, 0.0), (CrossingCounts{0, 0, 0, 0}));
}

TEST(CountCrossings, SineWaveEndpointsExcluded) {
  const HybridPath p = sampled(1e-3, 1000, [](double t) { return std::sin(2.0 * kPi * t); });
  EXPECT_EQ(count_crossings(p, 0.0), (CrossingCounts{0, 1, 0, 0}));
}

TEST(CountCrossings, SineWaveMatchesFineGrid) {
  for (const double u : {-0.9, -0.3, 0.2, 0.75}) {
    const HybridPath coarse = sampled(1e-3, 3000, [](double t) { return std::sin(2.0 * kPi * t); });
    const HybridPath fine = sampled(1e-5, 300000, [](double t) { return std::sin(2.0 * kPi * t); });
    EXPECT_EQ(count_crossings(coarse, u), count_crossings(fine, u));
    EXPECT_EQ(count_crossings(coarse, u), (CrossingCounts{3, 3, 0, 0}));
  }
}

TEST(CountCrossings, GridHitsTakeTheNextNonzeroSign) {
  HybridPath p;
  p.step = 0.1;
  p.values = {-1.0, 0.0, 0.0, 1.0, 0.0, -1.0};
  EXPECT_EQ(count_crossings(p, 0.0), (CrossingCounts{1, 1, 0, 0}));
  // Touching the level and returning is no crossing.
  p.values = {-1.0, 0.0, -1.0};
  EXPECT_EQ(count_crossings(p, 0.0), (CrossingCounts{0, 0, 0, 0}));
  // A path ending on the level never crosses at the endpoint.
  p.values = {-1.0, -0.5, 0.0};
  EXPECT_EQ(count_crossings(p, 0.0), (CrossingCounts{0, 0, 0, 0}));
}

TEST(CountCrossings, JumpLandingOnLevelIsNotACrossing) {
  HybridPath p;
  p.step = 0.5;
  p.values = {-1.0, 0.0, 0.5};
  p.jumps = {{0.5, -1.0, 0.0}};
  // The path is discontinuous at the hit, and the segment that follows starts on the level.
  EXPECT_EQ(count_crossings(p, 0.0), (CrossingCounts{0, 0, 0, 0}));
}

TEST(PathMax, Cases) {
  EXPECT_DOUBLE_EQ(path_max(sampled(1e-3, 1000, [](double t) { return 2.0 * t - 1.0; })), 1.0);
  HybridPath p;
  p.step = 0.25;
  p.values = {0.0, 0.5, 0.0, 0.5, 1.0};
  p.jumps = {{0.5, 2.0, 0.0}};
  EXPECT_DOUBLE_EQ(path_max(p), 2.0);
  const double m = path_max(sampled(1e-3, 1000, [](double t) { return std::sin(2.0 * kPi * t); }));
  EXPECT_NEAR(m, 1.0, 2e-6);
  EXPECT_LE(m, 1.0);
}

TEST(Properties, EndpointParityAndDecomposition) {
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    const HybridPath p = random_path(seed, 1e-3);
    const double m = path_max(p);
    EXPECT_GE(m, p.values.front());
    for (const double v : p.values) EXPECT_GE(m, v);
    for (const double u : {-1.0, 0.0, 0.7, 1.5}) {
      const CrossingCounts c = count_crossings(p, u);
      EXPECT_EQ(c.total(), c.continuous() + c.discontinuous());
      const double a = p.values.front() - u;
      const double b = p.values.back() - u;
      if (a * b > 0.0) {
        EXPECT_EQ(c.up(), c.down()) << "seed " << seed << " u " << u;
      } else if (a < 0.0 && b > 0.0) {
        EXPECT_EQ(c.up(), c.down() + 1) << "seed " << seed << " u " << u;
      } else if (a > 0.0 && b < 0.0) {
        EXPECT_EQ(c.down(), c.up() + 1) << "seed " << seed << " u " << u;
      }
      // up-crossing exists iff the path starts below u and exceeds it later.
      if (a < 0.0) EXPECT_EQ(c.up() >= 1, m > u);
    }
  }
}

TEST(Properties, GridHalvingRarelyChangesCounts) {
  constexpr int kReps = 10000;
  int changed = 0;
  int total = 0;
  for (int seed = 0; seed < kReps; ++seed) {
    const HybridPath coarse = random_path(static_cast<std::uint64_t>(seed), 1e-3);
    const HybridPath fine = random_path(static_cast<std::uint64_t>(seed), 5e-4);
    for (const double u : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
      ++total;
      if (!(count_crossings(coarse, u) == count_crossings(fine, u))) ++changed;
    }
  }
  EXPECT_LT(static_cast<double>(changed) / total, 0.005);
}

TEST(CombinePaths, JumpEventsCarryLeftAndRightValues) {
  const std::vector<double> smooth = {0.0, 0.1, 0.2, 0.3, 0.4};
  JumpPath j;
  j.horizon = 1.0;
  j.initial = 1.0;
  j.times = {0.3, 0.5};
  j.values = {2.0, -1.0};
  const HybridPath p = combine_paths(smooth, 0.25, j, [](double t) { return 0.4 * t; });
  ASSERT_EQ(p.jumps.size(), 2U);
  EXPECT_DOUBLE_EQ(p.jumps[0].left, 0.4 * 0.3 + 1.0);
  EXPECT_DOUBLE_EQ(p.jumps[0].right, 0.4 * 0.3 + 2.0);
  EXPECT_DOUBLE_EQ(p.jumps[1].left, 0.2 + 2.0);
  EXPECT_DOUBLE_EQ(p.jumps[1].right, 0.2 - 1.0);
  // Grid values use the right-continuous jump part; a grid point at a jump stores the right value.
  EXPECT_DOUBLE_EQ(p.values[1], 0.1 + 1.0);
  EXPECT_DOUBLE_EQ(p.values[2], 0.2 - 1.0);
  EXPECT_DOUBLE_EQ(p.values[4], 0.4 - 1.0);
}

TEST(OccupationTime, LinearPath) {
  const HybridPath p = sampled(1e-2, 100, [](double t) { return t; });
  EXPECT_NEAR(occupation_time(p, 0.5, 0.1), 0.2, 1e-12);
  EXPECT_NEAR(occupation_time(p, 0.0, 0.1), 0.1, 1e-12);
  EXPECT_EQ(occupation_time(p, 3.0, 0.1), 0.0);
  EXPECT_THROW((void)occupation_time(p, 0.0, 0.0), std::invalid_argument);
}

TEST(CppRateIntegralOnPath, UsesLeftLimitsAcrossJumps) {
  HybridPath p;
  p.step = 0.5;
  p.values = {-1.0, 1.0, 1.0};
  p.jumps = {{0.5, -1.0, 1.0}};
  // Below the level for t < 0.5 only, so the up-rate is lambda * 0.5 * (1 - Phi(1)).
  EXPECT_NEAR(cpp_disc_rate_integral(p, 0.0, 2.0, Direction::up), 2.0 * 0.5 * std_normal_sf(1.0), 1e-14);
  EXPECT_NEAR(cpp_disc_rate_integral(p, 0.0, 2.0, Direction::down), 2.0 * 0.5 * std_normal_cdf(-1.0), 1e-14);
}
