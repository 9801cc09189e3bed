#include "nashbandit/policies.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <string>

#include "nashbandit/errors.hpp"

namespace nashbandit {

Round phase1_length(std::size_t k, Round horizon) {
  if (k == 0) throw InvalidParameter("phase1_length needs k >= 1");
  if (horizon < 2) throw InvalidHorizon("phase1_length needs T >= 2");
  if (k == 1) return 0;
  const double kd = static_cast<double>(k);
  const double td = static_cast<double>(horizon);
  const double raw = 16.0 * std::sqrt(kd * td * std::log(td) / std::log(kd));
  if (raw >= td) return horizon;
  return static_cast<Round>(std::ceil(raw));
}

double ncb_index(double empirical_mean, std::size_t count, Round horizon) {
  if (count == 0) return kUnvisitedIndex;
  const double n = static_cast<double>(count);
  return empirical_mean + 4.0 * std::sqrt(empirical_mean * std::log(static_cast<double>(horizon)) / n);
}

double modified_ncb_index(double empirical_mean, std::size_t count, Round window, double c) {
  if (count == 0) return kUnvisitedIndex;
  const double n = static_cast<double>(count);
  return empirical_mean + 2.0 * c * std::sqrt(2.0 * empirical_mean * std::log(static_cast<double>(window)) / n);
}

double ucb_index(double empirical_mean, std::size_t count, Round horizon) {
  if (count == 0) return kUnvisitedIndex;
  return empirical_mean + std::sqrt(2.0 * std::log(static_cast<double>(horizon)) / static_cast<double>(count));
}

bool modified_ncb_phase1_done(std::span<const ArmStats> stats, double threshold) {
  for (const ArmStats& s : stats) {
    if (s.reward_sum > threshold) return true;
  }
  return false;
}

ArmIndex argmax_lowest(std::span<const double> values) {
  ArmIndex best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

NcbConfig NcbConfig::make(std::size_t k, Round horizon) {
  return NcbConfig{k, horizon, phase1_length(k, horizon)};
}

ModifiedNcbConfig ModifiedNcbConfig::make(std::size_t k, Round window, double c) {
  if (k == 0) throw InvalidParameter("modified NCB needs k >= 1");
  if (window == 0) throw InvalidHorizon("modified NCB needs W >= 1");
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidParameter("modified NCB needs c > 0");
  ModifiedNcbConfig cfg;
  cfg.k = k;
  cfg.window = window;
  cfg.c = c;
  cfg.stop_threshold = 420.0 * c * c * std::log(static_cast<double>(window));
  return cfg;
}

Policy::Policy(std::size_t k) : stats_(k) {
  if (k == 0) throw InvalidParameter("policy needs k >= 1");
}

void Policy::update(ArmIndex arm, double reward) {
  stats_.at(arm).add(reward);
  ++updates_;
}

UniformPolicy::UniformPolicy(std::size_t k, std::uint64_t seed) : Policy(k), rng_(seed) {}

ArmIndex UniformPolicy::select_arm(Round) { return rng_.below(arms()); }

ConstantPolicy::ConstantPolicy(std::size_t k, ArmIndex arm) : Policy(k), arm_(arm) {
  if (arm >= k) throw InvalidParameter("constant policy arm out of range");
}

ArmIndex ConstantPolicy::select_arm(Round) { return arm_; }

NcbPolicy::NcbPolicy(const NcbConfig& config, std::uint64_t seed) : Policy(config.k), config_(config), rng_(seed) {}

ArmIndex NcbPolicy::select_arm(Round t) {
  if (t <= config_.phase1_rounds) {
    phase_ = Phase::Explore;
    return rng_.below(arms());
  }
  phase_ = Phase::Exploit;
  ArmIndex best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < stats_.size(); ++i) {
    const double v = ncb_index(stats_[i].empirical_mean(), stats_[i].count, config_.horizon);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  return best;
}

ModifiedNcbPolicy::ModifiedNcbPolicy(const ModifiedNcbConfig& config, std::uint64_t seed)
    : Policy(config.k), config_(config), rng_(seed) {}

ArmIndex ModifiedNcbPolicy::select_arm(Round t) {
  if (t == 0 || t > config_.window) throw PolicyContractViolation("modified NCB round outside [1, W]");
  if (phase_ == Phase::Explore && modified_ncb_phase1_done(stats_, config_.stop_threshold)) {
    phase_ = Phase::Exploit;
  }
  if (phase_ == Phase::Explore) {
    ++explore_rounds_;
    return rng_.below(arms());
  }
  ArmIndex best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < stats_.size(); ++i) {
    const double v = modified_ncb_index(stats_[i].empirical_mean(), stats_[i].count, config_.window, config_.c);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  return best;
}

const char* to_string(EpochBranch branch) { return branch == EpochBranch::Uniform ? "uniform" : "ncb"; }

EpochBranch draw_epoch_branch(Round window, Rng& rng) {
  const double w = static_cast<double>(window);
  return rng.uniform01() < 1.0 / (w * w) ? EpochBranch::Uniform : EpochBranch::Ncb;
}

AnytimePolicy::AnytimePolicy(std::size_t k, std::uint64_t seed, double c)
    : Policy(k), c_(c), seed_(seed), rng_(derive_seed(seed, {0})) {
  if (!(c > 0.0)) throw InvalidParameter("anytime policy needs c > 0");
}

void AnytimePolicy::start_epoch() {
  EpochRecord rec;
  if (epochs_.empty()) {
    rec.h = 1;
    rec.window = 1;
    rec.rounds_before = 0;
  } else {
    const EpochRecord& prev = epochs_.back();
    rec.h = prev.h + 1;
    rec.window = prev.window * 2;
    rec.rounds_before = prev.rounds_before + prev.window;
  }
  rec.branch = draw_epoch_branch(rec.window, rng_);
  inner_.reset();
  if (rec.branch == EpochBranch::Ncb) {
    inner_ = std::make_unique<ModifiedNcbPolicy>(ModifiedNcbConfig::make(arms(), rec.window, c_),
                                                 derive_seed(seed_, {1, rec.h}));
  }
  epochs_.push_back(rec);
}

ArmIndex AnytimePolicy::select_arm(Round t) {
  if (t != round_ + 1) throw PolicyContractViolation("anytime policy rounds must be consecutive");
  round_ = t;
  if (epochs_.empty() || t > epochs_.back().rounds_before + epochs_.back().window) start_epoch();
  const EpochRecord& cur = epochs_.back();
  if (cur.branch == EpochBranch::Uniform) return rng_.below(arms());
  return inner_->select_arm(t - cur.rounds_before);
}

void AnytimePolicy::update(ArmIndex arm, double reward) {
  Policy::update(arm, reward);
  if (inner_) inner_->update(arm, reward);
}

Phase AnytimePolicy::phase() const {
  if (epochs_.empty() || epochs_.back().branch == EpochBranch::Uniform) return Phase::Explore;
  return inner_->phase();
}

UcbPolicy::UcbPolicy(std::size_t k, Round horizon) : Policy(k), horizon_(horizon), scratch_(k) {
  if (horizon < 2) throw InvalidHorizon("UCB needs T >= 2");
}

ArmIndex UcbPolicy::select_arm(Round) {
  for (std::size_t i = 0; i < stats_.size(); ++i) {
    scratch_[i] = ucb_index(stats_[i].empirical_mean(), stats_[i].count, horizon_);
  }
  return argmax_lowest(scratch_);
}

CounterexampleInstance counterexample_instance(Round horizon) {
  const double td = static_cast<double>(horizon);
  CounterexampleInstance out;
  out.log_mu1 = -td * (1.0 + std::log(2.0));
  out.precondition_met = horizon >= 2 && td > 25.0 * std::log(td);
  if (!out.precondition_met) {
    std::cerr << "warning: counterexample instance expects T > 25 ln T (T=" << horizon << ")\n";
  }
  ArmSpec arm1 = ArmSpec::bernoulli_log(out.log_mu1);
  out.mu1_clamped = arm1.clamped;
  out.instance = make_instance({arm1, ArmSpec::point_mass(1.0)});
  return out;
}

std::string PolicySpec::label() const {
  std::string out = name;
  if (window) out += "_w" + std::to_string(*window);
  if (arm) out += "_arm" + std::to_string(*arm);
  if (c != ModifiedNcbConfig::kDefaultC && (name == "modified_ncb" || name == "anytime")) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "_c%g", c);
    out += buf;
  }
  return out;
}

bool is_known_policy(const std::string& name) {
  return name == "ncb" || name == "modified_ncb" || name == "anytime" || name == "ucb" || name == "uniform" ||
         name == "constant";
}

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const BanditInstance& instance, Round horizon,
                                    std::uint64_t seed) {
  const std::size_t k = instance.k();
  if (spec.name == "ncb") return std::make_unique<NcbPolicy>(NcbConfig::make(k, horizon), seed);
  if (spec.name == "modified_ncb") {
    return std::make_unique<ModifiedNcbPolicy>(ModifiedNcbConfig::make(k, spec.window.value_or(horizon), spec.c), seed);
  }
  if (spec.name == "anytime") return std::make_unique<AnytimePolicy>(k, seed, spec.c);
  if (spec.name == "ucb") return std::make_unique<UcbPolicy>(k, horizon);
  if (spec.name == "uniform") return std::make_unique<UniformPolicy>(k, seed);
  if (spec.name == "constant") return std::make_unique<ConstantPolicy>(k, spec.arm.value_or(instance.optimal_arm()));
  throw ConfigError("unknown policy: " + spec.name);
}

}  // namespace nashbandit
