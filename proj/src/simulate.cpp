#include "nashbandit/simulate.hpp"

#include <string>
#include <vector>

#include "nashbandit/errors.hpp"

namespace nashbandit {

Trajectory run_policy(Policy& policy, const BanditInstance& instance, const RewardTable& table) {
  const std::size_t k = instance.k();
  if (table.arms() != k || policy.arms() != k) throw InvalidParameter("policy, instance and table disagree on k");
  const Round horizon = table.horizon();
  if (policy.horizon() != 0 && policy.horizon() != horizon) {
    throw InvalidHorizon("policy configured for T=" + std::to_string(policy.horizon()) + " but table has T=" +
                         std::to_string(horizon));
  }

  Trajectory traj;
  traj.horizon = horizon;
  traj.policy_name = policy.name();
  traj.pulls.reserve(horizon);
  std::vector<std::size_t> cursor(k, 0);
  for (Round t = 1; t <= horizon; ++t) {
    const ArmIndex arm = policy.select_arm(t);
    if (arm >= k) {
      throw PolicyContractViolation("policy " + policy.name() + " selected arm " + std::to_string(arm) +
                                    " at round " + std::to_string(t));
    }
    const Phase phase = policy.phase();
    const std::uint32_t epoch = policy.epoch();
    const double reward = table.entry(arm, cursor[arm]++);
    policy.update(arm, reward);
    traj.pulls.push_back(Pull{t, arm, reward, phase, epoch});
  }
  return traj;
}

}  // namespace nashbandit
