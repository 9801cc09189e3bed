#include "nashbandit/selftest.hpp"

#include <cmath>
#include <sstream>

#include "nashbandit/diagnostics.hpp"
#include "nashbandit/metrics.hpp"
#include "nashbandit/policies.hpp"
#include "nashbandit/simulate.hpp"

namespace nashbandit {

namespace {

SelfTestResult power_bound_sweep(Rng& rng) {
  constexpr int kDraws = 100000;
  int failures = 0;
  for (int i = 0; i < kDraws; ++i) {
    const double x = 0.5 * (rng.uniform01());
    const double a = rng.uniform01();
    if (!power_bound_holds(x, a)) ++failures;
  }
  return {"power_bound_inequality", failures == 0, std::to_string(kDraws) + " draws, " + std::to_string(failures) + " failures"};
}

SelfTestResult index_monotonicity(Rng& rng) {
  int failures = 0;
  for (int i = 0; i < 20000; ++i) {
    const double mean = rng.uniform01();
    const double delta = 0.1 * rng.uniform01();
    const std::size_t n = 1 + rng.below(1000);
    const Round T = 2 + rng.below(1000000);
    const Round W = 1 + rng.below(1000000);
    if (ncb_index(mean, n + 1, T) > ncb_index(mean, n, T)) ++failures;
    if (modified_ncb_index(mean, n + 1, W, 3.0) > modified_ncb_index(mean, n, W, 3.0)) ++failures;
    if (ncb_index(std::min(1.0, mean + delta), n, T) < ncb_index(mean, n, T)) ++failures;
    if (modified_ncb_index(std::min(1.0, mean + delta), n, W, 3.0) < modified_ncb_index(mean, n, W, 3.0)) ++failures;
  }
  return {"index_monotonicity", failures == 0, std::to_string(failures) + " violations"};
}

SelfTestResult welfare_orderings(Rng& rng) {
  int failures = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto T = static_cast<Eigen::Index>(1 + rng.below(200));
    Vector logs(T);
    for (Eigen::Index t = 0; t < T; ++t) logs(t) = std::log(0.01 + 0.99 * rng.uniform01());
    PerRoundMeans prm;
    prm.log_values = logs;
    prm.values = logs.array().exp();
    prm.standard_errors = Vector::Zero(T);
    prm.replications = 1;
    const WelfareRegret nr = nash_regret(prm, 1.0);
    if (average_regret(prm, 1.0) > nr.regret + 1e-12) ++failures;
    const double direct = std::pow(prm.values.prod(), 1.0 / static_cast<double>(T));
    if (std::abs((1.0 - nr.regret) - direct) > 1e-9 * direct) ++failures;
    double prev = 0.0;
    for (double p : {-4.0, -1.0, -0.5, 0.0, 0.25, 0.5, 1.0}) {
      const double v = p_mean_welfare(prm, p);
      if (v < prev - 1e-12) ++failures;
      prev = v;
    }
  }
  return {"welfare_orderings", failures == 0, std::to_string(failures) + " violations"};
}

SelfTestResult anytime_schedule(std::uint64_t seed) {
  int failures = 0;
  const BanditInstance inst = make_instance({ArmSpec::bernoulli(0.7), ArmSpec::bernoulli(0.3)});
  for (std::uint64_t r = 0; r < 20; ++r) {
    const Round T = 1000 + 97 * r;
    AnytimePolicy policy(2, derive_seed(seed, {r}));
    const RewardTable table = build_reward_table(inst, T, derive_seed(seed, {r, 7}));
    run_policy(policy, inst, table);
    for (const EpochRecord& e : policy.epochs()) {
      if (e.window != (Round{1} << (e.h - 1)) || e.rounds_before != e.window - 1) ++failures;
      if (e.h == 1 && e.branch != EpochBranch::Uniform) ++failures;
      if (e.rounds_before + 1 > T) ++failures;
    }
  }
  return {"anytime_schedule", failures == 0, std::to_string(failures) + " violations"};
}

}  // namespace

std::vector<SelfTestResult> run_selftest(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<SelfTestResult> out;
  out.push_back(power_bound_sweep(rng));
  out.push_back(index_monotonicity(rng));
  out.push_back(welfare_orderings(rng));
  out.push_back(anytime_schedule(seed));
  return out;
}

}  // namespace nashbandit
