#pragma once

#include "nashbandit/bandit.hpp"
#include "nashbandit/policies.hpp"

namespace nashbandit {

// Plays table.horizon() rounds: select, read the next unread entry of the
// chosen arm's row, update. Throws PolicyContractViolation if the policy
// picks an arm outside [0, k), and InvalidHorizon if a horizon-aware policy
// was configured for a different T than the table holds.
Trajectory run_policy(Policy& policy, const BanditInstance& instance, const RewardTable& table);

}  // namespace nashbandit
