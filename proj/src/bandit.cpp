#include "nashbandit/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "nashbandit/errors.hpp"

namespace nashbandit {

namespace {

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

const char* to_string(Distribution kind) {
  switch (kind) {
    case Distribution::Bernoulli: return "bernoulli";
    case Distribution::Beta: return "beta";
    case Distribution::PointMass: return "point_mass";
  }
  return "unknown";
}

const char* to_string(Phase phase) { return phase == Phase::Explore ? "explore" : "exploit"; }

ArmSpec ArmSpec::bernoulli(double p) {
  if (!in_unit_interval(p)) throw InvalidInstance("bernoulli probability outside [0,1]: " + std::to_string(p));
  ArmSpec spec;
  spec.kind = Distribution::Bernoulli;
  spec.mean = p;
  spec.log_mean = std::log(p);
  return spec;
}

ArmSpec ArmSpec::bernoulli_log(double log_p) {
  if (!(log_p <= 0.0)) throw InvalidInstance("bernoulli log-probability must be <= 0");
  ArmSpec spec;
  spec.kind = Distribution::Bernoulli;
  spec.log_mean = log_p;
  spec.mean = std::exp(log_p);
  if (spec.mean == 0.0 && std::isfinite(log_p)) {
    spec.mean = std::numeric_limits<double>::denorm_min();
    spec.clamped = true;
  }
  return spec;
}

ArmSpec ArmSpec::beta_dist(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw InvalidInstance("beta parameters must be positive and finite");
  }
  ArmSpec spec;
  spec.kind = Distribution::Beta;
  spec.alpha = alpha;
  spec.beta = beta;
  spec.mean = alpha / (alpha + beta);
  spec.log_mean = std::log(alpha) - std::log(alpha + beta);
  return spec;
}

ArmSpec ArmSpec::point_mass(double value) {
  if (!in_unit_interval(value)) throw InvalidInstance("point mass outside [0,1]: " + std::to_string(value));
  ArmSpec spec;
  spec.kind = Distribution::PointMass;
  spec.mean = value;
  spec.log_mean = std::log(value);
  return spec;
}

double ArmSpec::sample(Rng& rng) const {
  switch (kind) {
    case Distribution::Bernoulli:
      return rng.uniform01() < mean ? 1.0 : 0.0;
    case Distribution::Beta: {
      std::gamma_distribution<double> ga(alpha, 1.0);
      std::gamma_distribution<double> gb(beta, 1.0);
      const double x = ga(rng);
      const double y = gb(rng);
      const double s = x + y;
      return s > 0.0 ? std::clamp(x / s, 0.0, 1.0) : 0.5;
    }
    case Distribution::PointMass:
      return mean;
  }
  return mean;
}

Vector BanditInstance::means() const {
  Vector v(static_cast<Eigen::Index>(k()));
  for (std::size_t i = 0; i < k(); ++i) v(static_cast<Eigen::Index>(i)) = arms_[i].mean;
  return v;
}

Vector BanditInstance::log_means() const {
  Vector v(static_cast<Eigen::Index>(k()));
  for (std::size_t i = 0; i < k(); ++i) v(static_cast<Eigen::Index>(i)) = arms_[i].log_mean;
  return v;
}

BanditInstance make_instance(std::vector<ArmSpec> arm_specs) {
  if (arm_specs.empty()) throw InvalidInstance("instance needs at least one arm");
  for (std::size_t i = 0; i < arm_specs.size(); ++i) {
    if (!in_unit_interval(arm_specs[i].mean)) {
      throw InvalidInstance("arm " + std::to_string(i) + " mean outside [0,1]");
    }
  }
  BanditInstance inst;
  inst.arms_ = std::move(arm_specs);
  inst.optimal_arm_ = 0;
  for (std::size_t i = 1; i < inst.arms_.size(); ++i) {
    if (inst.arms_[i].mean > inst.arms_[inst.optimal_arm_].mean) inst.optimal_arm_ = i;
  }
  inst.optimal_mean_ = inst.arms_[inst.optimal_arm_].mean;
  return inst;
}

RewardTable::RewardTable(Table entries, std::uint64_t seed) : entries_(std::move(entries)), seed_(seed) {
  if (entries_.cols() == 0) throw InvalidHorizon("reward table needs T >= 1");
  if (entries_.size() > 0 && (entries_.minCoeff() < 0.0 || entries_.maxCoeff() > 1.0)) {
    throw InvalidParameter("reward table entries must lie in [0,1]");
  }
}

RewardTable build_reward_table(const BanditInstance& instance, Round horizon, std::uint64_t seed) {
  if (horizon == 0) throw InvalidHorizon("T must be >= 1");
  const auto k = static_cast<Eigen::Index>(instance.k());
  const auto cols = static_cast<Eigen::Index>(horizon);
  Table entries(k, cols);
  for (Eigen::Index i = 0; i < k; ++i) {
    const ArmSpec& arm = instance.arm(static_cast<ArmIndex>(i));
    if (arm.kind == Distribution::PointMass) {
      entries.row(i).setConstant(arm.mean);
      continue;
    }
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(i)}));
    for (Eigen::Index s = 0; s < cols; ++s) entries(i, s) = arm.sample(rng);
  }
  return RewardTable(std::move(entries), seed);
}

std::vector<std::size_t> Trajectory::counts(std::size_t k) const {
  std::vector<std::size_t> out(k, 0);
  for (const Pull& p : pulls) ++out.at(p.arm);
  return out;
}

}  // namespace nashbandit
