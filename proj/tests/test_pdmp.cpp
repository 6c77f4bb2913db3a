#include <gtest/gtest.h>

#include <cmath>

#include "crossings/numeric.hpp"
#include "crossings/pdmp.hpp"

using namespace crossings;

namespace {

PdmpSpec unit_drift_no_jumps() {
  PdmpSpec s;
  s.drift = [](double) { return 1.0; };
  s.initial = NormalLaw{0.0, 1.0};
  s.lambda = 0.0;
  return s;
}

PdmpSpec linear_with_jumps() {
  PdmpSpec s;
  s.drift = PdmpSpec::linear_drift(-1.0, 1.0);
  s.initial = NormalLaw{0.0, 1.0};
  s.lambda = 1.0;
  s.mark = PdmpSpec::normal_mark(0.0, 1.0);
  return s;
}

}  // namespace

TEST(SimulatePdmp, ExponentialDecayMatchesExactSolution) {
  PdmpSpec s;
  s.drift = [](double x) { return -x; };
  s.initial = PointLaw{1.0};
  Rng rng(1);
  const HybridPath p = simulate_pdmp(s, rng);
  EXPECT_NEAR(p.values.back(), std::exp(-1.0), 1e-9);
  EXPECT_NEAR(p.values.back(), 0.3678794, 1e-7);
  EXPECT_TRUE(p.jumps.empty());
}

TEST(SimulatePdmp, ZeroDriftGivesPureJumpPath) {
  PdmpSpec s;
  s.drift = [](double) { return 0.0; };
  s.initial = PointLaw{0.5};
  s.lambda = 5.0;
  s.mark = PdmpSpec::normal_mark(0.0, 1.0);
  Rng rng(2);
  const HybridPath p = simulate_pdmp(s, rng);
  ASSERT_FALSE(p.jumps.empty());
  double current = 0.5;
  std::size_t next = 0;
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    while (next < p.jumps.size() && p.jumps[next].time <= p.time(i)) {
      EXPECT_DOUBLE_EQ(p.jumps[next].left, current);
      current = p.jumps[next].right;
      ++next;
    }
    EXPECT_DOUBLE_EQ(p.values[i], current);
  }
}

TEST(SimulatePdmp, JumpSizesFollowTheMarkKernel) {
  PdmpSpec s = linear_with_jumps();
  s.mark = [](double pre, Rng&) { return -2.0 * pre + 0.25; };
  Rng rng(3);
  for (int rep = 0; rep < 50; ++rep) {
    const HybridPath p = simulate_pdmp(s, rng);
    for (const JumpEvent& j : p.jumps) EXPECT_DOUBLE_EQ(j.right - j.left, -2.0 * j.left + 0.25);
  }
}

TEST(SimulatePdmp, OdeConsistencyBetweenJumps) {
  const PdmpSpec s = linear_with_jumps();
  Rng rng(4);
  const double h = s.ode_step;
  for (int rep = 0; rep < 50; ++rep) {
    const HybridPath p = simulate_pdmp(s, rng);
    std::size_t next = 0;
    for (std::size_t i = 0; i + 1 < p.values.size(); ++i) {
      while (next < p.jumps.size() && p.jumps[next].time <= p.time(i)) ++next;
      if (next < p.jumps.size() && p.jumps[next].time <= p.time(i + 1)) continue;
      const double x = p.values[i];
      // x'' = mu' mu = -(1 - x), so the one-step defect is at most |1 - x| h^2 / 2 to leading order.
      EXPECT_LE(std::abs(p.values[i + 1] - x - h * (1.0 - x)), 0.5 * std::abs(1.0 - x) * h * h * 1.01 + 1e-15);
    }
  }
}

TEST(SimulatePdmp, NonFiniteStateAborts) {
  PdmpSpec s;
  s.drift = [](double x) { return x * x; };
  s.initial = PointLaw{1.0};
  s.horizon = 2.0;
  Rng rng(5);
  EXPECT_THROW((void)simulate_pdmp(s, rng), std::domain_error);
}

TEST(SimulatePdmp, RejectsInvalidSpecs) {
  PdmpSpec s = linear_with_jumps();
  s.ode_step = 0.0;
  Rng rng(6);
  EXPECT_THROW((void)simulate_pdmp(s, rng), std::invalid_argument);
  s = linear_with_jumps();
  s.mark = nullptr;
  EXPECT_THROW((void)simulate_pdmp(s, rng), std::invalid_argument);
  s = linear_with_jumps();
  s.lambda = -1.0;
  EXPECT_THROW((void)simulate_pdmp(s, rng), std::invalid_argument);
}

TEST(BorovkovLast, ClosedFormValues) {
  const double integral = std_normal_cdf(0.0) - std_normal_cdf(-1.0);
  EXPECT_NEAR(bl_mean_continuous(1.0, integral), 0.3413447, 1e-7);
  EXPECT_NEAR(bl_mean_continuous(-2.0, integral), 2.0 * integral, 1e-15);
  EXPECT_EQ(bl_mean_continuous(1.5, 0.0), 0.0);
  EXPECT_THROW((void)bl_mean_continuous(0.0, integral), std::invalid_argument);
  // Stationary form |mu(u)| T p(u).
  EXPECT_DOUBLE_EQ(bl_mean_continuous(0.7, 2.0 * std_normal_pdf(0.3)), 0.7 * 2.0 * std_normal_pdf(0.3));
}

TEST(OccupationDensity, ShiftedNormalMatchesClosedForm) {
  const MCEstimate e = occupation_density_integral(unit_drift_no_jumps(), 0.0, 0.01, 100000, 7);
  EXPECT_NEAR(e.mean, std_normal_cdf(0.0) - std_normal_cdf(-1.0), 3.0 * e.se);
  EXPECT_NEAR(e.mean, 0.3413, 3.0 * e.se + 1e-4);
}

TEST(OccupationDensity, FarLevelGivesZero) {
  PdmpSpec s = unit_drift_no_jumps();
  s.initial = PointLaw{0.0};
  const MCEstimate e = occupation_density_integral(s, 5.0, 0.01, 100, 8);
  EXPECT_EQ(e.mean, 0.0);
}

TEST(OccupationDensity, HalvingWindowChangesEstimateSlightly) {
  const PdmpSpec s = linear_with_jumps();
  const MCEstimate a = occupation_density_integral(s, 0.5, 0.01, 20000, 9);
  const MCEstimate b = occupation_density_integral(s, 0.5, 0.005, 20000, 9);
  EXPECT_LT(std::abs(a.mean - b.mean), 3.0 * std::max(a.se, b.se));
}

TEST(OccupationDensity, ThreadCountDoesNotChangeTheEstimate) {
  const PdmpSpec s = linear_with_jumps();
  EXPECT_EQ(occupation_density_integral(s, 0.5, 0.01, 2000, 10, 1), occupation_density_integral(s, 0.5, 0.01, 2000, 10, 3));
}

TEST(NetCrossing, NoJumpsCancelExactly) {
  const NetCrossingCheck c = net_jump_crossing_check(unit_drift_no_jumps(), 0.0, 10000, 11);
  EXPECT_EQ(c.lhs, 0.0);
  EXPECT_NEAR(c.rhs, 0.0, 1e-12);
  EXPECT_TRUE(c.direction_exclusive);
}

TEST(NetCrossing, IdentityHoldsWithJumps) {
  const NetCrossingCheck c = net_jump_crossing_check(linear_with_jumps(), 0.5, 20000, 12);
  EXPECT_LT(std::abs(c.lhs - c.rhs), 3.0 * c.combined_se + 1e-12);
  EXPECT_TRUE(c.direction_exclusive);
  EXPECT_GT(c.mean_continuous, 0.0);
}

TEST(NetCrossing, NegativeDriftLevelUsesSignedContinuousTerm) {
  // mu(1.5) = -0.5 < 0: continuous crossings there are all down-crossings.
  const NetCrossingCheck c = net_jump_crossing_check(linear_with_jumps(), 1.5, 20000, 13);
  EXPECT_LT(std::abs(c.lhs - c.rhs), 3.0 * c.combined_se + 1e-12);
  EXPECT_TRUE(c.direction_exclusive);
}

TEST(NetCrossing, RejectsDriftZero) {
  EXPECT_THROW((void)net_jump_crossing_check(linear_with_jumps(), 1.0, 100, 14), std::invalid_argument);
}

TEST(BorovkovLast, AgreesWithSimulatedContinuousCrossings) {
  const PdmpSpec s = linear_with_jumps();
  const MCEstimate occ = occupation_density_integral(s, 0.5, 0.01, 20000, 15);
  const NetCrossingCheck c = net_jump_crossing_check(s, 0.5, 20000, 15);
  const double predicted = bl_mean_continuous(s.drift(0.5), occ.mean);
  const double se = std::hypot(0.5 * occ.se, c.continuous_se);
  EXPECT_LT(std::abs(predicted - c.mean_continuous), 3.0 * se);
}
