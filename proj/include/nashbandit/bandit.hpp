#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nashbandit/rng.hpp"
#include "nashbandit/types.hpp"

namespace nashbandit {

enum class Distribution { Bernoulli, Beta, PointMass };

const char* to_string(Distribution kind);

// One arm's reward distribution on [0, 1].
//
// The mean is also carried in log form. Means far below the smallest
// positive double (for instance (2e)^-T at large T) keep their exact
// logarithm here, and the linear value is clamped to the smallest positive
// subnormal with `clamped` set. Welfare computations read `log_mean`.
struct ArmSpec {
  Distribution kind = Distribution::PointMass;
  double alpha = 0.0;  // beta only
  double beta = 0.0;   // beta only
  double mean = 0.0;
  double log_mean = 0.0;
  bool clamped = false;

  static ArmSpec bernoulli(double p);
  // Bernoulli arm whose success probability is exp(log_p); log_p <= 0.
  static ArmSpec bernoulli_log(double log_p);
  static ArmSpec beta_dist(double alpha, double beta);
  static ArmSpec point_mass(double value);

  double sample(Rng& rng) const;

  friend bool operator==(const ArmSpec&, const ArmSpec&) = default;
};

class BanditInstance {
 public:
  const std::vector<ArmSpec>& arms() const { return arms_; }
  const ArmSpec& arm(ArmIndex i) const { return arms_.at(i); }
  std::size_t k() const { return arms_.size(); }
  double optimal_mean() const { return optimal_mean_; }
  ArmIndex optimal_arm() const { return optimal_arm_; }
  Vector means() const;
  Vector log_means() const;

 private:
  friend BanditInstance make_instance(std::vector<ArmSpec> arm_specs);
  std::vector<ArmSpec> arms_;
  double optimal_mean_ = 0.0;
  ArmIndex optimal_arm_ = 0;
};

// Throws InvalidInstance on an empty list or a mean outside [0, 1].
// Ties for the optimal arm go to the lowest index.
BanditInstance make_instance(std::vector<ArmSpec> arm_specs);

// Canonical-model table: entry(i, s) is the (s+1)-th draw from arm i.
class RewardTable {
 public:
  // Throws InvalidHorizon for zero columns and InvalidParameter for entries
  // outside [0, 1].
  RewardTable(Table entries, std::uint64_t seed);

  double entry(ArmIndex arm, std::size_t sample) const { return entries_(static_cast<Eigen::Index>(arm), static_cast<Eigen::Index>(sample)); }
  auto row(ArmIndex arm) const { return entries_.row(static_cast<Eigen::Index>(arm)); }
  const Table& entries() const { return entries_; }
  std::size_t arms() const { return static_cast<std::size_t>(entries_.rows()); }
  Round horizon() const { return static_cast<Round>(entries_.cols()); }
  std::uint64_t seed() const { return seed_; }

 private:
  Table entries_;
  std::uint64_t seed_;
};

// Row i is filled from its own stream derived from (seed, i), so a row can
// be regenerated on its own and matches the materialized table.
RewardTable build_reward_table(const BanditInstance& instance, Round horizon, std::uint64_t seed);

enum class Phase : std::uint8_t { Explore, Exploit };

const char* to_string(Phase phase);

struct Pull {
  Round t = 0;
  ArmIndex arm = 0;
  double reward = 0.0;
  Phase phase = Phase::Explore;
  // Epoch index h for the anytime wrapper; 1 for single-epoch policies.
  std::uint32_t epoch = 1;
};

struct Trajectory {
  std::vector<Pull> pulls;
  Round horizon = 0;
  std::string policy_name;

  // Pull counts per arm.
  std::vector<std::size_t> counts(std::size_t k) const;
};

struct ArmStats {
  std::size_t count = 0;
  double reward_sum = 0.0;

  void add(double reward) {
    ++count;
    reward_sum += reward;
  }
  // Only meaningful when count > 0; returns 0 otherwise.
  double empirical_mean() const { return count > 0 ? reward_sum / static_cast<double>(count) : 0.0; }
};

}  // namespace nashbandit
