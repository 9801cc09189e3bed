#include "nashbandit/metrics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "nashbandit/errors.hpp"

namespace nashbandit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_and_se(std::span<const double> xs) {
  MeanSe out;
  if (xs.empty()) return out;
  const auto n = static_cast<double>(xs.size());
  for (double x : xs) out.mean += x;
  out.mean /= n;
  if (xs.size() < 2) return out;
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.se = std::sqrt(ss / (n - 1.0) / n);
  return out;
}

// Geometric mean of the true means of one replication's pulls.
double pulled_mean_geometric_mean(std::span<const std::uint16_t> arms, const Vector& log_means) {
  if (arms.empty()) return 0.0;
  double acc = 0.0;
  for (std::uint16_t a : arms) {
    const double lm = log_means(a);
    if (lm == kNegInf) return 0.0;
    acc += lm;
  }
  return std::exp(acc / static_cast<double>(arms.size()));
}

Ensemble ensemble_from(std::span<const Trajectory> trajectories, const BanditInstance& instance) {
  if (trajectories.empty()) throw EnsembleMismatch("ensemble is empty");
  Ensemble e(instance, trajectories.front().horizon);
  for (const Trajectory& t : trajectories) e.add(t);
  return e;
}

}  // namespace

double realized_geometric_mean(const Trajectory& trajectory) {
  if (trajectory.pulls.empty()) return 0.0;
  double acc = 0.0;
  for (const Pull& p : trajectory.pulls) {
    if (p.reward <= 0.0) return 0.0;
    acc += std::log(p.reward);
  }
  return std::exp(acc / static_cast<double>(trajectory.pulls.size()));
}

double power_mean_from_logs(const Eigen::Ref<const Vector>& log_values, double p) {
  if (p > 1.0 || std::isnan(p)) throw InvalidParameter("power mean needs p <= 1");
  if (log_values.size() == 0) return 0.0;
  if (p == 0.0) return geometric_mean_from_logs(log_values);
  const bool has_zero = log_values.minCoeff() == kNegInf;
  if (has_zero && p < 0.0) return 0.0;
  const double lse = log_sum_exp(p * log_values);
  if (lse == kNegInf) return 0.0;
  return std::exp((lse - std::log(static_cast<double>(log_values.size()))) / p);
}

Ensemble::Ensemble(const BanditInstance& instance, Round horizon) : instance_(instance), horizon_(horizon) {
  if (instance.k() > std::numeric_limits<std::uint16_t>::max()) throw InvalidParameter("too many arms for an ensemble");
}

void Ensemble::add(const Trajectory& trajectory) {
  if (trajectory.horizon != horizon_ || trajectory.pulls.size() != horizon_) {
    throw EnsembleMismatch("trajectory horizon " + std::to_string(trajectory.horizon) + " does not match ensemble T=" +
                           std::to_string(horizon_));
  }
  std::vector<std::uint16_t> arms(trajectory.pulls.size());
  for (std::size_t t = 0; t < arms.size(); ++t) {
    const ArmIndex a = trajectory.pulls[t].arm;
    if (a >= instance_.k()) throw EnsembleMismatch("trajectory pulls an arm outside the instance");
    arms[t] = static_cast<std::uint16_t>(a);
  }
  arms_.push_back(std::move(arms));
  realized_gm_.push_back(nashbandit::realized_geometric_mean(trajectory));
}

void Ensemble::add(std::vector<std::uint16_t> arms, double realized_gm) {
  if (arms.size() != horizon_) throw EnsembleMismatch("replication length does not match ensemble T");
  for (std::uint16_t a : arms) {
    if (a >= instance_.k()) throw EnsembleMismatch("replication pulls an arm outside the instance");
  }
  arms_.push_back(std::move(arms));
  realized_gm_.push_back(realized_gm);
}

PerRoundMeans per_round_means(const Ensemble& ensemble) {
  const std::size_t R = ensemble.replications();
  if (R == 0) throw EnsembleMismatch("ensemble is empty");
  const BanditInstance& inst = ensemble.instance();
  const auto k = static_cast<Eigen::Index>(inst.k());
  const auto T = static_cast<Eigen::Index>(ensemble.horizon());
  const Vector means = inst.means();
  const Vector log_means = inst.log_means();

  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> counts =
      Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>::Zero(k, T);
  for (std::size_t r = 0; r < R; ++r) {
    const auto arms = ensemble.arms(r);
    for (Eigen::Index t = 0; t < T; ++t) ++counts(arms[static_cast<std::size_t>(t)], t);
  }

  PerRoundMeans out;
  out.replications = R;
  out.values.resize(T);
  out.log_values.resize(T);
  out.standard_errors.resize(T);
  const double Rd = static_cast<double>(R);
  const double log_R = std::log(Rd);
  Vector terms(k);
  for (Eigen::Index t = 0; t < T; ++t) {
    for (Eigen::Index i = 0; i < k; ++i) {
      const auto c = counts(i, t);
      terms(i) = c > 0 ? std::log(static_cast<double>(c)) + log_means(i) : kNegInf;
    }
    const double lv = log_sum_exp(terms) - log_R;
    const double v = std::exp(lv);
    out.log_values(t) = lv;
    out.values(t) = v;
    double ss = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
      const double d = means(i) - v;
      ss += static_cast<double>(counts(i, t)) * d * d;
    }
    out.standard_errors(t) = R > 1 ? std::sqrt(ss / (Rd - 1.0) / Rd) : 0.0;
  }
  return out;
}

PerRoundMeans per_round_means(std::span<const Trajectory> trajectories, const BanditInstance& instance) {
  return per_round_means(ensemble_from(trajectories, instance));
}

WelfareRegret nash_regret(const PerRoundMeans& per_round, double optimal_mean) {
  WelfareRegret out;
  if (per_round.log_values.size() == 0 || per_round.log_values.minCoeff() == kNegInf) {
    out.regret = optimal_mean;
    out.welfare_is_zero = true;
    return out;
  }
  out.regret = optimal_mean - geometric_mean_from_logs(per_round.log_values);
  return out;
}

double average_regret(const PerRoundMeans& per_round, double optimal_mean) {
  if (per_round.values.size() == 0) return optimal_mean;
  return optimal_mean - per_round.values.mean();
}

double nr0_estimate(std::span<const Trajectory> trajectories, double optimal_mean) {
  if (trajectories.empty()) throw EnsembleMismatch("ensemble is empty");
  double acc = 0.0;
  for (const Trajectory& t : trajectories) acc += realized_geometric_mean(t);
  return optimal_mean - acc / static_cast<double>(trajectories.size());
}

double nr1_estimate(std::span<const Trajectory> trajectories, const BanditInstance& instance, double optimal_mean) {
  const Ensemble e = ensemble_from(trajectories, instance);
  const Vector log_means = instance.log_means();
  double acc = 0.0;
  for (std::size_t r = 0; r < e.replications(); ++r) acc += pulled_mean_geometric_mean(e.arms(r), log_means);
  return optimal_mean - acc / static_cast<double>(e.replications());
}

double p_mean_welfare(const PerRoundMeans& per_round, double p) {
  return power_mean_from_logs(per_round.log_values, p);
}

RegretReport regret_report(const Ensemble& ensemble, std::span<const double> p_values) {
  const PerRoundMeans prm = per_round_means(ensemble);
  const BanditInstance& inst = ensemble.instance();
  const std::size_t R = ensemble.replications();
  const std::size_t T = ensemble.horizon();
  const Vector means = inst.means();
  const Vector log_means = inst.log_means();

  RegretReport rep;
  rep.horizon = ensemble.horizon();
  rep.replications = R;
  rep.optimal_mean = inst.optimal_mean();

  const WelfareRegret nr = nash_regret(prm, rep.optimal_mean);
  rep.nash_regret = nr.regret;
  rep.welfare_is_zero = nr.welfare_is_zero;
  rep.average_regret = average_regret(prm, rep.optimal_mean);

  std::vector<double> avg_mean(R), ratio_sum(R), gm_true(R), gm_realized(R);
  for (std::size_t r = 0; r < R; ++r) {
    const auto arms = ensemble.arms(r);
    double lin = 0.0;
    double ratio = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      const std::uint16_t a = arms[t];
      lin += means(a);
      if (!nr.welfare_is_zero) ratio += std::exp(log_means(a) - prm.log_values(static_cast<Eigen::Index>(t)));
    }
    avg_mean[r] = lin / static_cast<double>(T);
    ratio_sum[r] = ratio;
    gm_true[r] = pulled_mean_geometric_mean(arms, log_means);
    gm_realized[r] = ensemble.realized_geometric_mean(r);
  }

  rep.average_regret_se = mean_and_se(avg_mean).se;
  if (!nr.welfare_is_zero) {
    const double gm = rep.optimal_mean - rep.nash_regret;
    rep.nash_regret_se = gm * mean_and_se(ratio_sum).se / static_cast<double>(T);
  }
  const MeanSe m1 = mean_and_se(gm_true);
  rep.nr1 = rep.optimal_mean - m1.mean;
  rep.nr1_se = m1.se;
  const MeanSe m0 = mean_and_se(gm_realized);
  rep.nr0 = rep.optimal_mean - m0.mean;
  rep.nr0_se = m0.se;
  for (double p : p_values) rep.p_mean_welfare[p] = p_mean_welfare(prm, p);
  return rep;
}

}  // namespace nashbandit
