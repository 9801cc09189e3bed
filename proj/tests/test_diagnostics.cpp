#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "nashbandit/diagnostics.hpp"
#include "nashbandit/errors.hpp"
#include "nashbandit/policies.hpp"
#include "nashbandit/simulate.hpp"

namespace nashbandit {
namespace {

std::vector<ArmIndex> explore_arms(const Trajectory& traj) {
  std::vector<ArmIndex> arms;
  for (const Pull& p : traj.pulls) {
    if (p.phase == Phase::Explore) arms.push_back(p.arm);
  }
  return arms;
}

const EventReport& find(const EventSet& events, const std::string& name) {
  for (const EventReport& e : events) {
    if (e.event_name == name) return e;
  }
  throw std::runtime_error("missing event " + name);
}

TEST(NcbEvents, PointMassesHold) {
  const BanditInstance inst = make_instance({ArmSpec::point_mass(0.9), ArmSpec::point_mass(0.0)});
  const Round T = 1000;
  const RewardTable table = build_reward_table(inst, T, 1);
  NcbPolicy policy(NcbConfig::make(2, T), 3);
  const Trajectory traj = run_policy(policy, inst, table);
  const EventSet g = check_G(table, inst, explore_arms(traj), phase1_length(2, T));
  ASSERT_EQ(g.size(), 4u);
  EXPECT_EQ(g[0].event_name, "G1");
  EXPECT_EQ(g[3].event_name, "G");
  for (const EventReport& e : g) {
    EXPECT_TRUE(e.holds.at(0)) << e.event_name;
    EXPECT_TRUE(e.applicable) << e.event_name;
  }
  EXPECT_DOUBLE_EQ(find(g, "G").bound, 4.0 / 1000.0);
}

TEST(NcbEvents, AdversarialZeroRowBreaksConcentration) {
  const BanditInstance inst = make_instance({ArmSpec::bernoulli(0.9), ArmSpec::bernoulli(0.8)});
  const Round T = 1000;
  Table entries = Table::Ones(2, T);
  entries.row(0).setZero();
  const RewardTable table(entries, 0);
  std::vector<ArmIndex> pulls;
  for (Round t = 0; t < T; ++t) pulls.push_back(t % 2);
  const EventSet g = check_G(table, inst, pulls, phase1_length(2, T));
  EXPECT_TRUE(find(g, "G1").holds[0]);
  EXPECT_FALSE(find(g, "G2").holds[0]);
  EXPECT_FALSE(find(g, "G").holds[0]);
  EXPECT_FALSE(find(g, "G3").applicable);
}

TEST(NcbEvents, UnbalancedPhaseOneBreaksG1) {
  const BanditInstance inst = make_instance({ArmSpec::point_mass(0.9), ArmSpec::point_mass(0.5)});
  const Round T = 1000;
  const RewardTable table = build_reward_table(inst, T, 0);
  const std::vector<ArmIndex> pulls(T, 0);
  const EventSet g = check_G(table, inst, pulls, phase1_length(2, T));
  EXPECT_FALSE(find(g, "G1").holds[0]);
  EXPECT_TRUE(find(g, "G2").holds[0]);
}

TEST(NcbEvents, NoPhaseOneIsNotApplicable) {
  const BanditInstance inst = make_instance({ArmSpec::point_mass(0.9)});
  const RewardTable table = build_reward_table(inst, 10, 0);
  EXPECT_THROW(check_G(table, inst, {}, phase1_length(1, 10)), NotApplicable);
}

TEST(NcbEvents, Thresholds) {
  const NcbEventThresholds th = ncb_event_thresholds(2, 10000, 8250);
  EXPECT_EQ(th.min_samples, 2062u);
  const double root = std::sqrt(2.0 * std::log(2.0) * std::log(1e4)) / 100.0;
  EXPECT_NEAR(th.small_mean, 6.0 * root, 1e-15);
  EXPECT_NEAR(th.small_mean_cap, 9.0 * root, 1e-15);
}

TEST(ModifiedNcbEvents, BoundaryArmBelongsToSmallMeanEvent) {
  // mu = mu* / 64 exactly.
  const BanditInstance inst = make_instance({ArmSpec::point_mass(1.0), ArmSpec::point_mass(0.015625)});
  const Round T = 100000;
  const RewardTable table = build_reward_table(inst, T, 0);
  std::vector<ArmIndex> pulls;
  for (Round t = 0; t < T; ++t) pulls.push_back(t % 2);
  const EventSet e = check_E(table, inst, 3.0, pulls);
  ASSERT_EQ(e.size(), 4u);
  EXPECT_TRUE(find(e, "E3").applicable);
  EXPECT_TRUE(find(e, "E3").holds[0]);
  EXPECT_TRUE(find(e, "E1").holds[0]);
  EXPECT_TRUE(find(e, "E").holds[0]);
}

TEST(ModifiedNcbEvents, ZeroOptimumIsNotApplicable) {
  const BanditInstance inst = make_instance({ArmSpec::point_mass(0.0), ArmSpec::point_mass(0.0)});
  const RewardTable table = build_reward_table(inst, 100, 0);
  EXPECT_THROW(check_E(table, inst, 3.0, {}), NotApplicable);
  EXPECT_THROW(measure_tau(inst, 100, 100, 3.0, 0), NotApplicable);
}

TEST(ModifiedNcbEvents, Thresholds) {
  const BanditInstance inst = make_instance({ArmSpec::bernoulli(0.9), ArmSpec::bernoulli(0.1)});
  const ModifiedNcbEventThresholds th = modified_ncb_event_thresholds(inst, 1000000, 3.0);
  EXPECT_NEAR(th.s_value, 138.15510557964274, 1e-9);
  EXPECT_EQ(th.min_rounds, 35367u);
  EXPECT_EQ(th.min_samples, 8841u);
  EXPECT_NEAR(th.small_mean, 0.9 / 64.0, 1e-17);
}

TEST(Tau, PointMassStopsAtThreshold) {
  const BanditInstance inst = make_instance({ArmSpec::point_mass(1.0)});
  const TauReport rep = measure_tau(inst, 60000, 60000, 3.0, 0);
  EXPECT_NEAR(rep.threshold, 41587.937, 1e-3);
  EXPECT_EQ(rep.tau, 41588u);
  EXPECT_FALSE(rep.truncated);
}

TEST(Tau, TruncatedWhenWindowTooShort) {
  const BanditInstance inst = make_instance({ArmSpec::point_mass(1.0)});
  const TauReport rep = measure_tau(inst, 22026, 22026, 3.0, 0);
  EXPECT_GT(rep.threshold, 22026.0);
  EXPECT_EQ(rep.tau, 22026u);
  EXPECT_TRUE(rep.truncated);
}

TEST(PowerBound, Boundaries) {
  EXPECT_TRUE(power_bound_holds(0.0, 0.0));
  EXPECT_TRUE(power_bound_holds(0.5, 1.0));
  EXPECT_TRUE(power_bound_holds(0.5, 0.0));
  EXPECT_TRUE(power_bound_holds(0.0, 1.0));
  EXPECT_TRUE(power_bound_holds(0.25, 0.5));
  EXPECT_THROW(power_bound_holds(0.6, 0.5), InvalidParameter);
  EXPECT_THROW(power_bound_holds(0.2, -0.1), InvalidParameter);
  EXPECT_THROW(power_bound_holds(0.2, 1.5), InvalidParameter);
}

TEST(EventReport, Merge) {
  EventSet all;
  const BanditInstance inst = make_instance({ArmSpec::point_mass(0.9), ArmSpec::bernoulli(0.5)});
  const Round T = 1000;
  Table bad = Table::Ones(2, T);
  bad.row(0).setZero();
  std::vector<ArmIndex> pulls;
  for (Round t = 0; t < T; ++t) pulls.push_back(t % 2);
  merge_events(all, check_G(build_reward_table(inst, T, 0), inst, pulls, phase1_length(2, T)));
  merge_events(all, check_G(RewardTable(bad, 0), inst, pulls, phase1_length(2, T)));
  EXPECT_EQ(find(all, "G").holds.size(), 2u);
  EXPECT_EQ(find(all, "G").failures(), 1u);
  EXPECT_DOUBLE_EQ(find(all, "G").failure_rate, 0.5);
}

TEST(NcbProperty, GoodEventKeepsSmallArmsOutOfPhaseTwo) {
  // 0.2 is below 6 sqrt(k ln k ln T) / sqrt(T) = 0.214 for k = 2, T = 1e4.
  const BanditInstance inst = make_instance({ArmSpec::bernoulli(0.9), ArmSpec::bernoulli(0.2)});
  const Round T = 10000;
  const Round phase1 = phase1_length(2, T);
  ASSERT_LT(inst.arm(1).mean, ncb_event_thresholds(2, T, phase1).small_mean);
  int good = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const RewardTable table = build_reward_table(inst, T, derive_seed(seed, {0}));
    NcbPolicy policy(NcbConfig::make(2, T), derive_seed(seed, {1}));
    const Trajectory traj = run_policy(policy, inst, table);
    const EventSet g = check_G(table, inst, explore_arms(traj), phase1);
    if (!find(g, "G").holds[0]) continue;
    ++good;
    for (const Pull& p : traj.pulls) {
      if (p.phase == Phase::Exploit) ASSERT_NE(p.arm, 1u) << "seed " << seed << " round " << p.t;
    }
  }
  EXPECT_GE(good, 95);
}

TEST(ModifiedNcbProperty, TauInBracketUnderGoodEvent) {
  const BanditInstance inst = make_instance({ArmSpec::bernoulli(0.9), ArmSpec::bernoulli(0.5)});
  const Round T = 200000;
  int good = 0;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const RewardTable table = build_reward_table(inst, T, derive_seed(seed, {0}));
    ModifiedNcbPolicy policy(ModifiedNcbConfig::make(2, T), derive_seed(seed, {1}));
    const Trajectory traj = run_policy(policy, inst, table);
    const EventSet e = check_E(table, inst, 3.0, explore_arms(traj));
    const TauReport tau = measure_tau(table, inst, T, T, 3.0, derive_seed(seed, {1}));
    EXPECT_EQ(tau.tau, policy.explore_rounds());
    if (!find(e, "E").holds[0]) continue;
    ++good;
    EXPECT_FALSE(tau.truncated);
    EXPECT_TRUE(tau.in_bracket()) << "tau " << tau.tau << " bracket [" << tau.lower << ", " << tau.upper << "]";
  }
  EXPECT_GE(good, 5);
}

}  // namespace
}  // namespace nashbandit
