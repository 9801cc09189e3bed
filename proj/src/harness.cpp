#include "nashbandit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "nashbandit/errors.hpp"
#include "nashbandit/simulate.hpp"

namespace nashbandit {

namespace {

struct CompactRun {
  std::vector<std::uint16_t> arms;
  double realized_gm = 0.0;
};

CompactRun compact(const Trajectory& traj) {
  CompactRun run;
  run.arms.resize(traj.pulls.size());
  for (std::size_t t = 0; t < traj.pulls.size(); ++t) run.arms[t] = static_cast<std::uint16_t>(traj.pulls[t].arm);
  run.realized_gm = realized_geometric_mean(traj);
  return run;
}

unsigned worker_count(const RunOptions& options) {
  if (options.threads > 0) return options.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

RegretReport run_group(const BanditInstance& instance, const PolicySpec& spec, Round horizon, std::size_t replications,
                       std::uint64_t base_seed, std::span<const double> p_means, unsigned threads) {
  const std::string label = spec.label();
  std::vector<CompactRun> runs(replications);
  parallel_for(replications, threads, [&](std::size_t r) {
    const RewardTable table = build_reward_table(instance, horizon, table_seed(base_seed, label, horizon, r));
    auto policy = make_policy(spec, instance, horizon, policy_seed(base_seed, label, horizon, r));
    runs[r] = compact(run_policy(*policy, instance, table));
  });
  Ensemble ensemble(instance, horizon);
  for (CompactRun& run : runs) ensemble.add(std::move(run.arms), run.realized_gm);
  return regret_report(ensemble, p_means);
}

}  // namespace

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::uint64_t table_seed(std::uint64_t base_seed, const std::string& policy, Round horizon, std::size_t r) {
  return derive_seed(base_seed, {label_hash(policy), horizon, r, 0});
}

std::uint64_t policy_seed(std::uint64_t base_seed, const std::string& policy, Round horizon, std::size_t r) {
  return derive_seed(base_seed, {label_hash(policy), horizon, r, 1});
}

SweepResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  for (const PolicySpec& p : config.policies) {
    if (!is_known_policy(p.name)) throw ConfigError("unknown policy '" + p.name + "'");
  }
  if (config.replications < 1) throw ConfigError("replications must be >= 1");
  const unsigned threads = worker_count(options);

  SweepResult result;
  for (const PolicySpec& spec : config.policies) {
    std::vector<std::pair<Round, double>> points;
    for (Round T : config.horizons) {
      const BanditInstance instance = config.instance.for_horizon(T);
      if (config.instance.ucb_counterexample) result.counterexample_clamped[T] = instance.arm(0).clamped;
      SweepRow row;
      row.policy = spec.label();
      row.k = instance.k();
      row.horizon = T;
      row.seed = config.base_seed;
      row.report = run_group(instance, spec, T, config.replications, config.base_seed, config.p_means, threads);
      if (!row.report.welfare_is_zero) points.emplace_back(T, row.report.nash_regret);
      result.rows.push_back(std::move(row));
    }
    if (points.size() >= 3) {
      try {
        result.slopes[spec.label()] = fit_loglog_slope(points);
      } catch (const NotEnoughData&) {
        // NR <= 0 on too many horizons; no slope for this policy.
      }
    }
  }
  return result;
}

SlopeFit fit_loglog_slope(const std::vector<std::pair<Round, double>>& points) {
  SlopeFit fit;
  std::vector<std::pair<double, double>> usable;
  for (const auto& [T, nr] : points) {
    if (!(nr > 0.0) || T == 0) {
      fit.warnings.push_back("excluded T=" + std::to_string(T) + " with non-positive Nash regret");
      continue;
    }
    usable.emplace_back(std::log(static_cast<double>(T)), std::log(nr));
  }
  if (usable.size() < 3) throw NotEnoughData("slope fit needs at least 3 points with positive Nash regret");

  const auto n = static_cast<Eigen::Index>(usable.size());
  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = usable[static_cast<std::size_t>(i)].first;
    y(i) = usable[static_cast<std::size_t>(i)].second;
  }
  const Eigen::Vector2d beta = X.colPivHouseholderQr().solve(y);
  fit.intercept = beta(0);
  fit.slope = beta(1);
  fit.points_used = usable.size();

  const Eigen::VectorXd resid = y - X * beta;
  const double dof = static_cast<double>(n - 2);
  const double sigma2 = resid.squaredNorm() / dof;
  const Eigen::VectorXd xc = X.col(1).array() - X.col(1).mean();
  const double sxx = xc.squaredNorm();
  const double se = sxx > 0.0 ? std::sqrt(sigma2 / sxx) : 0.0;
  const boost::math::students_t dist(dof);
  fit.half_width = boost::math::quantile(boost::math::complement(dist, 0.025)) * se;
  return fit;
}

CounterexampleReport counterexample_command(Round horizon, std::size_t replications, std::uint64_t seed,
                                            const RunOptions& options) {
  if (horizon < 2) throw InvalidHorizon("counterexample needs T >= 2");
  if (replications < 1) throw ConfigError("replications must be >= 1");
  const CounterexampleInstance ce = counterexample_instance(horizon);
  CounterexampleReport rep;
  rep.horizon = horizon;
  rep.replications = replications;
  rep.seed = seed;
  rep.log_mu1 = ce.log_mu1;
  rep.mu1_clamped = ce.mu1_clamped;
  rep.precondition_met = ce.precondition_met;
  rep.ncb_phase1_rounds = phase1_length(2, horizon);
  const unsigned threads = worker_count(options);
  PolicySpec ucb;
  ucb.name = "ucb";
  PolicySpec ncb;
  ncb.name = "ncb";
  rep.ucb = run_group(ce.instance, ucb, horizon, replications, seed, {}, threads);
  rep.ncb = run_group(ce.instance, ncb, horizon, replications, seed, {}, threads);
  return rep;
}

std::vector<HorizonDiagnostics> diagnose(const ExperimentConfig& config, const RunOptions& options) {
  const unsigned threads = worker_count(options);
  const double c = config.diagnostics_c;
  std::vector<HorizonDiagnostics> out;
  for (Round T : config.horizons) {
    const BanditInstance instance = config.instance.for_horizon(T);
    const std::size_t k = instance.k();
    HorizonDiagnostics diag;
    diag.horizon = T;
    diag.phase1_rounds = phase1_length(k, T);
    const bool g_ok = diag.phase1_rounds >= 1;
    const bool e_ok = instance.optimal_mean() > 0.0;
    if (!g_ok) diag.g_note = "NCB has no Phase I for k = 1";
    if (!e_ok) diag.e_note = "S is undefined for mu* = 0";

    struct RepResult {
      EventSet g, e;
      TauReport tau;
    };
    std::vector<RepResult> reps(config.replications);
    parallel_for(config.replications, threads, [&](std::size_t r) {
      const RewardTable table = build_reward_table(instance, T, table_seed(config.base_seed, "diagnose", T, r));
      const std::uint64_t pseed = policy_seed(config.base_seed, "diagnose", T, r);
      if (g_ok) {
        NcbPolicy ncb(NcbConfig::make(k, T), derive_seed(pseed, {0}));
        std::vector<ArmIndex> phase1(diag.phase1_rounds);
        for (Round t = 1; t <= diag.phase1_rounds; ++t) phase1[t - 1] = ncb.select_arm(t);
        reps[r].g = check_G(table, instance, phase1, diag.phase1_rounds);
      }
      if (e_ok) {
        UniformPolicy uniform(k, derive_seed(pseed, {1}));
        std::vector<ArmIndex> pulls(T);
        for (Round t = 1; t <= T; ++t) pulls[t - 1] = uniform.select_arm(t);
        reps[r].e = check_E(table, instance, c, pulls);
        reps[r].tau = measure_tau(table, instance, T, T, c, derive_seed(pseed, {2}));
      }
    });
    if (g_ok) diag.g_events.emplace();
    if (e_ok) diag.e_events.emplace();
    for (const RepResult& rep : reps) {
      if (g_ok) merge_events(*diag.g_events, rep.g);
      if (e_ok) {
        merge_events(*diag.e_events, rep.e);
        diag.taus.push_back(rep.tau);
      }
    }
    out.push_back(std::move(diag));
  }
  return out;
}

}  // namespace nashbandit
