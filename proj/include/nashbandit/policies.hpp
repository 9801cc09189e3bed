#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nashbandit/bandit.hpp"
#include "nashbandit/rng.hpp"

namespace nashbandit {

inline constexpr double kUnvisitedIndex = std::numeric_limits<double>::infinity();

// Length of the uniform-exploration prefix of NCB:
// min(T, ceil(16 sqrt(k T ln T / ln k))) for k >= 2, and 0 for k = 1.
// Throws InvalidHorizon for T < 2 and InvalidParameter for k = 0.
Round phase1_length(std::size_t k, Round horizon);

// mean + 4 sqrt(mean ln T / n); +inf when n = 0.
double ncb_index(double empirical_mean, std::size_t count, Round horizon);

// mean + 2c sqrt(2 mean ln W / n); +inf when n = 0.
double modified_ncb_index(double empirical_mean, std::size_t count, Round window, double c);

// mean + sqrt(2 ln T / n); +inf when n = 0.
double ucb_index(double empirical_mean, std::size_t count, Round horizon);

// Returns true once some arm's total observed reward is strictly above the
// threshold. n_i * mean_i is read directly as the reward sum.
bool modified_ncb_phase1_done(std::span<const ArmStats> stats, double threshold);

// Index of the largest value; the lowest index wins ties.
ArmIndex argmax_lowest(std::span<const double> values);

struct NcbConfig {
  std::size_t k = 0;
  Round horizon = 0;
  Round phase1_rounds = 0;

  static NcbConfig make(std::size_t k, Round horizon);
};

struct ModifiedNcbConfig {
  static constexpr double kDefaultC = 3.0;

  std::size_t k = 0;
  Round window = 0;
  double c = kDefaultC;
  double stop_threshold = 0.0;  // 420 c^2 ln W

  static ModifiedNcbConfig make(std::size_t k, Round window, double c = kDefaultC);
};

// Step state machine: select_arm(t) for t = 1, 2, ... then update(arm, reward).
class Policy {
 public:
  explicit Policy(std::size_t k);
  virtual ~Policy() = default;

  virtual std::string name() const = 0;
  // Horizon the policy was configured for; 0 for horizon-oblivious policies.
  virtual Round horizon() const { return 0; }
  virtual ArmIndex select_arm(Round t) = 0;
  virtual void update(ArmIndex arm, double reward);
  virtual Phase phase() const = 0;
  virtual std::uint32_t epoch() const { return 1; }

  std::size_t arms() const { return stats_.size(); }
  std::span<const ArmStats> stats() const { return stats_; }
  std::uint64_t updates() const { return updates_; }

 protected:
  std::vector<ArmStats> stats_;
  std::uint64_t updates_ = 0;
};

class UniformPolicy final : public Policy {
 public:
  UniformPolicy(std::size_t k, std::uint64_t seed);
  std::string name() const override { return "uniform"; }
  ArmIndex select_arm(Round t) override;
  Phase phase() const override { return Phase::Explore; }

 private:
  Rng rng_;
};

// Always pulls one fixed arm.
class ConstantPolicy final : public Policy {
 public:
  ConstantPolicy(std::size_t k, ArmIndex arm);
  std::string name() const override { return "constant"; }
  ArmIndex select_arm(Round t) override;
  Phase phase() const override { return Phase::Exploit; }

 private:
  ArmIndex arm_;
};

// Uniform exploration for the first phase1_rounds rounds, then the arm with
// the highest Nash confidence bound.
class NcbPolicy final : public Policy {
 public:
  NcbPolicy(const NcbConfig& config, std::uint64_t seed);
  std::string name() const override { return "ncb"; }
  Round horizon() const override { return config_.horizon; }
  ArmIndex select_arm(Round t) override;
  Phase phase() const override { return phase_; }
  const NcbConfig& config() const { return config_; }

 private:
  NcbConfig config_;
  Rng rng_;
  Phase phase_ = Phase::Explore;
};

// Uniform exploration until some arm's reward sum exceeds 420 c^2 ln W, then
// the arm with the highest modified bound, for W rounds in total.
class ModifiedNcbPolicy final : public Policy {
 public:
  ModifiedNcbPolicy(const ModifiedNcbConfig& config, std::uint64_t seed);
  std::string name() const override { return "modified_ncb"; }
  Round horizon() const override { return config_.window; }
  ArmIndex select_arm(Round t) override;
  Phase phase() const override { return phase_; }
  const ModifiedNcbConfig& config() const { return config_; }
  // Number of rounds spent in the uniform phase so far.
  Round explore_rounds() const { return explore_rounds_; }

 private:
  ModifiedNcbConfig config_;
  Rng rng_;
  Phase phase_ = Phase::Explore;
  Round explore_rounds_ = 0;
};

enum class EpochBranch : std::uint8_t { Uniform, Ncb };

const char* to_string(EpochBranch branch);

// Draws Uniform with probability 1/W^2 and Ncb otherwise.
EpochBranch draw_epoch_branch(Round window, Rng& rng);

struct EpochRecord {
  std::uint32_t h = 0;
  Round window = 0;             // W_h
  Round rounds_before = 0;      // R_h
  EpochBranch branch = EpochBranch::Uniform;
};

// Doubling-window wrapper. Epoch h has window W_h = 2^(h-1) and starts at
// round R_h + 1 with R_h = W_h - 1. Each epoch either samples uniformly or
// runs a fresh ModifiedNcbPolicy with window W_h; nothing carries over.
class AnytimePolicy final : public Policy {
 public:
  AnytimePolicy(std::size_t k, std::uint64_t seed, double c = ModifiedNcbConfig::kDefaultC);
  std::string name() const override { return "anytime"; }
  ArmIndex select_arm(Round t) override;
  void update(ArmIndex arm, double reward) override;
  Phase phase() const override;
  std::uint32_t epoch() const override { return epochs_.empty() ? 1 : epochs_.back().h; }

  const std::vector<EpochRecord>& epochs() const { return epochs_; }

 private:
  void start_epoch();

  double c_;
  std::uint64_t seed_;
  Rng rng_;
  Round round_ = 0;
  std::vector<EpochRecord> epochs_;
  std::unique_ptr<ModifiedNcbPolicy> inner_;
};

class UcbPolicy final : public Policy {
 public:
  UcbPolicy(std::size_t k, Round horizon);
  std::string name() const override { return "ucb"; }
  Round horizon() const override { return horizon_; }
  ArmIndex select_arm(Round t) override;
  Phase phase() const override { return Phase::Exploit; }

 private:
  Round horizon_;
  std::vector<double> scratch_;
};

struct CounterexampleInstance {
  BanditInstance instance;
  double log_mu1 = 0.0;        // -T ln(2e)
  bool mu1_clamped = false;    // linear mean clamped to the smallest subnormal
  bool precondition_met = true;  // T > 25 ln T
};

// Two arms: Bernoulli with mean (2e)^-T and a point mass at 1.
CounterexampleInstance counterexample_instance(Round horizon);

// Policy selection as it appears in experiment configs.
struct PolicySpec {
  std::string name;
  double c = ModifiedNcbConfig::kDefaultC;
  // Window for modified_ncb; unset means W = T.
  std::optional<Round> window;
  // Arm for the constant policy; unset means the optimal arm.
  std::optional<ArmIndex> arm;

  // Report label: the name, plus any non-default parameters, e.g.
  // "modified_ncb_w1024_c2".
  std::string label() const;
};

bool is_known_policy(const std::string& name);

// Throws ConfigError for unknown names.
std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const BanditInstance& instance, Round horizon,
                                    std::uint64_t seed);

}  // namespace nashbandit
