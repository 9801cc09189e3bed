#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nashbandit/bandit.hpp"
#include "nashbandit/diagnostics.hpp"
#include "nashbandit/metrics.hpp"
#include "nashbandit/policies.hpp"

namespace nashbandit {

inline constexpr int kFormatVersion = 1;

// Either an explicit arm list or the two-arm UCB counterexample, which is
// rebuilt for each horizon.
struct InstanceConfig {
  std::vector<ArmSpec> arms;
  bool ucb_counterexample = false;

  BanditInstance for_horizon(Round horizon) const;
};

struct ExperimentConfig {
  InstanceConfig instance;
  std::vector<PolicySpec> policies;
  std::vector<Round> horizons;
  std::size_t replications = 1;
  std::uint64_t base_seed = 0;
  std::vector<double> p_means;
  double diagnostics_c = ModifiedNcbConfig::kDefaultC;
  std::string csv_name = "results.csv";
  std::string json_name = "results.json";
};

// Parses the JSON config document; throws ConfigError on schema violations,
// unknown keys, unknown policies, R < 1, or horizons that are empty or not
// strictly increasing.
ExperimentConfig parse_config(const std::string& json_text);
// Throws IoError if the file cannot be read.
ExperimentConfig load_config(const std::filesystem::path& path);

struct RunOptions {
  // 0 means one worker per hardware thread.
  unsigned threads = 0;
};

struct SweepRow {
  std::string policy;
  std::size_t k = 0;
  Round horizon = 0;
  std::uint64_t seed = 0;
  RegretReport report;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double half_width = 0.0;  // 95% confidence half-width of the slope
  std::size_t points_used = 0;
  std::vector<std::string> warnings;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // ordered by (policy, T) as listed in the config
  std::map<std::string, SlopeFit> slopes;  // only for policies with >= 3 usable horizons
  std::map<Round, bool> counterexample_clamped;
};

// Seeds for replication r of (policy, T); derived, so job order is irrelevant.
std::uint64_t table_seed(std::uint64_t base_seed, const std::string& policy, Round horizon, std::size_t r);
std::uint64_t policy_seed(std::uint64_t base_seed, const std::string& policy, Round horizon, std::size_t r);

// Runs every (policy, T, r) job. Output depends only on the config.
SweepResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

// OLS of ln NR on ln T. Points with NR <= 0 are dropped with a warning;
// throws NotEnoughData with fewer than 3 usable points.
SlopeFit fit_loglog_slope(const std::vector<std::pair<Round, double>>& points);

struct CounterexampleReport {
  Round horizon = 0;
  std::size_t replications = 0;
  std::uint64_t seed = 0;
  double log_mu1 = 0.0;
  bool mu1_clamped = false;
  bool precondition_met = true;
  Round ncb_phase1_rounds = 0;
  RegretReport ucb;
  RegretReport ncb;
};

// Runs UCB and NCB on the two-arm counterexample instance.
CounterexampleReport counterexample_command(Round horizon, std::size_t replications, std::uint64_t seed,
                                            const RunOptions& options = {});

struct HorizonDiagnostics {
  Round horizon = 0;
  Round phase1_rounds = 0;
  std::optional<EventSet> g_events;  // unset when NCB has no Phase I
  std::string g_note;
  std::optional<EventSet> e_events;  // unset when mu* = 0
  std::vector<TauReport> taus;
  std::string e_note;
};

// Good-event reports and phase-switch measurements for each configured
// horizon, over the configured number of replications (W = T for tau).
std::vector<HorizonDiagnostics> diagnose(const ExperimentConfig& config, const RunOptions& options = {});

// Runs fn(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace nashbandit
