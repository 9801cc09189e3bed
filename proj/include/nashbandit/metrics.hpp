#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <vector>

#include "nashbandit/bandit.hpp"
#include "nashbandit/types.hpp"

namespace nashbandit {

// log(sum_i exp(x_i)), stable for large negative inputs. -inf for an empty
// input or when every term is -inf.
template <typename Derived>
typename Derived::Scalar log_sum_exp(const Eigen::DenseBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  if (x.size() == 0) return -std::numeric_limits<Scalar>::infinity();
  const Scalar m = x.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((x.derived().array() - m).exp().sum());
}

// Geometric mean of exp(log_values): exp(mean(log_values)). Zero if any
// entry is -inf.
template <typename Derived>
typename Derived::Scalar geometric_mean_from_logs(const Eigen::DenseBase<Derived>& log_values) {
  using Scalar = typename Derived::Scalar;
  if (log_values.size() == 0) return Scalar(0);
  if (log_values.minCoeff() == -std::numeric_limits<Scalar>::infinity()) return Scalar(0);
  return std::exp(log_values.sum() / static_cast<Scalar>(log_values.size()));
}

// Generalized mean ((1/n) sum v^p)^(1/p) of v = exp(log_values), for p <= 1.
// p = 0 is the geometric mean. Throws InvalidParameter for p > 1.
double power_mean_from_logs(const Eigen::Ref<const Vector>& log_values, double p);

// Per-round estimates of E[mu_{I_t}] over an ensemble of runs.
struct PerRoundMeans {
  Vector values;
  // log(values), kept separately so means far below the double range keep
  // their magnitude.
  Vector log_values;
  Vector standard_errors;
  std::size_t replications = 0;

  Round horizon() const { return static_cast<Round>(values.size()); }
};

// Compact ensemble: the arm sequence of every replication plus the
// per-replication geometric mean of realized rewards.
class Ensemble {
 public:
  Ensemble(const BanditInstance& instance, Round horizon);

  // Throws EnsembleMismatch if the trajectory's horizon differs.
  void add(const Trajectory& trajectory);
  // Adds a replication already reduced to its arm sequence.
  void add(std::vector<std::uint16_t> arms, double realized_geometric_mean);

  const BanditInstance& instance() const { return instance_; }
  Round horizon() const { return horizon_; }
  std::size_t replications() const { return arms_.size(); }
  std::span<const std::uint16_t> arms(std::size_t r) const { return arms_[r]; }
  // Geometric mean of X_1..X_T for replication r (0 if any X_t = 0).
  double realized_geometric_mean(std::size_t r) const { return realized_gm_[r]; }

 private:
  BanditInstance instance_;
  Round horizon_;
  std::vector<std::vector<std::uint16_t>> arms_;
  std::vector<double> realized_gm_;
};

// Geometric mean of a run's realized rewards; 0 if any reward is 0.
double realized_geometric_mean(const Trajectory& trajectory);

// Throws EnsembleMismatch for an empty ensemble or differing horizons.
PerRoundMeans per_round_means(std::span<const Trajectory> trajectories, const BanditInstance& instance);
PerRoundMeans per_round_means(const Ensemble& ensemble);

struct WelfareRegret {
  double regret = 0.0;
  bool welfare_is_zero = false;
};

// mu* minus the geometric mean of the per-round means, computed from the
// log values. Any zero per-round mean collapses the welfare to 0.
WelfareRegret nash_regret(const PerRoundMeans& per_round, double optimal_mean);

// mu* minus the arithmetic mean of the per-round means.
double average_regret(const PerRoundMeans& per_round, double optimal_mean);

// mu* - E[(prod X_t)^(1/T)], averaged over replications.
double nr0_estimate(std::span<const Trajectory> trajectories, double optimal_mean);
// mu* - E[(prod mu_{I_t})^(1/T)], averaged over replications.
double nr1_estimate(std::span<const Trajectory> trajectories, const BanditInstance& instance, double optimal_mean);

// Generalized mean of the per-round means. p = 1 is the arithmetic mean and
// p = 0 the geometric mean. Throws InvalidParameter for p > 1.
double p_mean_welfare(const PerRoundMeans& per_round, double p);

struct RegretReport {
  Round horizon = 0;
  std::size_t replications = 0;
  double optimal_mean = 0.0;
  double nash_regret = 0.0;
  double nash_regret_se = 0.0;
  double average_regret = 0.0;
  double average_regret_se = 0.0;
  double nr0 = 0.0;
  double nr0_se = 0.0;
  double nr1 = 0.0;
  double nr1_se = 0.0;
  bool welfare_is_zero = false;
  std::map<double, double> p_mean_welfare;
};

// All estimates with standard errors. The Nash regret error is the
// multivariate delta method through the mean of logs.
RegretReport regret_report(const Ensemble& ensemble, std::span<const double> p_values = {});

}  // namespace nashbandit
