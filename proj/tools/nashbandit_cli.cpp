// Command-line front end: run / sweep / counterexample / diagnose / selftest.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "nashbandit/errors.hpp"
#include "nashbandit/harness.hpp"
#include "nashbandit/report_io.hpp"
#include "nashbandit/selftest.hpp"

namespace fs = std::filesystem;
using namespace nashbandit;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory", dir.string());
}

void print_rows(const SweepResult& result) {
  for (const SweepRow& row : result.rows) {
    const RegretReport& r = row.report;
    std::cout << row.policy << " T=" << row.horizon << " NR=" << format_real(r.nash_regret) << " (se "
              << format_real(r.nash_regret_se) << ") R_T=" << format_real(r.average_regret)
              << (r.welfare_is_zero ? " [welfare zero]" : "") << '\n';
  }
}

int run_or_sweep(const std::string& config_path, const fs::path& out_dir, unsigned threads, bool sweep) {
  const ExperimentConfig config = load_config(config_path);
  ensure_dir(out_dir);
  const SweepResult result = run_experiment(config, RunOptions{threads});

  std::ostringstream csv;
  write_csv(csv, result);
  write_file(out_dir / config.csv_name, csv.str());

  nlohmann::json j = to_json(result, config);
  if (!sweep) j.erase("slopes");
  write_file(out_dir / config.json_name, j.dump(2) + "\n");

  print_rows(result);
  if (sweep) {
    for (const auto& [policy, fit] : result.slopes) {
      for (const std::string& w : fit.warnings) std::cerr << "warning: " << policy << ": " << w << '\n';
      std::cout << policy << " slope=" << format_real(fit.slope) << " +/- " << format_real(fit.half_width) << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nash-regret bandit simulations"};
  app.require_subcommand(1);

  std::string out_dir = ".";
  unsigned threads = 0;
  std::string config_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
    sub->add_option("--threads", threads, "Worker threads (0 = all cores, 1 = serial)")->capture_default_str();
  };

  auto* run = app.add_subcommand("run", "Run every (policy, T) in a config; writes CSV and JSON");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  add_common(run);

  auto* sweep = app.add_subcommand("sweep", "Like run, plus log-log slope fits of Nash regret against T");
  sweep->add_option("config", config_path, "Experiment config (JSON)")->required();
  add_common(sweep);

  Round ce_T = 16384;
  std::size_t ce_reps = 100;
  std::uint64_t ce_seed = 0;
  auto* ce = app.add_subcommand("counterexample", "UCB versus NCB on the two-arm counterexample instance");
  ce->add_option("--T", ce_T, "Horizon")->capture_default_str();
  ce->add_option("--reps", ce_reps, "Replications")->capture_default_str();
  ce->add_option("--seed", ce_seed, "Base seed")->capture_default_str();
  add_common(ce);

  auto* diag = app.add_subcommand("diagnose", "Good-event frequencies and phase-switch brackets");
  diag->add_option("config", config_path, "Experiment config (JSON)")->required();
  add_common(diag);

  std::uint64_t st_seed = 1;
  auto* self = app.add_subcommand("selftest", "Property sweeps over the library");
  self->add_option("--seed", st_seed, "Seed")->capture_default_str();
  add_common(self);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (run->parsed()) return run_or_sweep(config_path, out_dir, threads, false);
    if (sweep->parsed()) return run_or_sweep(config_path, out_dir, threads, true);
    if (ce->parsed()) {
      ensure_dir(out_dir);
      const CounterexampleReport rep = counterexample_command(ce_T, ce_reps, ce_seed, RunOptions{threads});
      write_file(fs::path(out_dir) / "counterexample.json", to_json(rep).dump(2) + "\n");
      std::cout << "T=" << rep.horizon << " R=" << rep.replications << " ln(mu1)=" << format_real(rep.log_mu1)
                << (rep.mu1_clamped ? " (linear mu1 clamped)" : "") << '\n'
                << "UCB NR=" << format_real(rep.ucb.nash_regret) << '\n'
                << "NCB NR=" << format_real(rep.ncb.nash_regret) << " (Phase I " << rep.ncb_phase1_rounds
                << " rounds)\n";
      return 0;
    }
    if (diag->parsed()) {
      const ExperimentConfig config = load_config(config_path);
      ensure_dir(out_dir);
      const auto diags = diagnose(config, RunOptions{threads});
      write_file(fs::path(out_dir) / "diagnostics.json", to_json(diags, config).dump(2) + "\n");
      for (const HorizonDiagnostics& d : diags) {
        std::cout << "T=" << d.horizon;
        if (d.g_events) std::cout << " G failure rate=" << format_real(d.g_events->back().failure_rate);
        if (d.e_events) std::cout << " E failure rate=" << format_real(d.e_events->back().failure_rate);
        std::cout << '\n';
      }
      return 0;
    }
    if (self->parsed()) {
      ensure_dir(out_dir);
      nlohmann::json j = {{"format_version", kFormatVersion}, {"results", nlohmann::json::array()}};
      bool ok = true;
      for (const SelfTestResult& r : run_selftest(st_seed)) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
        j["results"].push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
        ok = ok && r.passed;
      }
      write_file(fs::path(out_dir) / "selftest.json", j.dump(2) + "\n");
      return ok ? 0 : kExitRuntime;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
