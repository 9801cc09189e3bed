#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "nashbandit/errors.hpp"
#include "nashbandit/harness.hpp"
#include "nashbandit/report_io.hpp"

namespace nashbandit {
namespace {

const char* kPointMassConfig = R"({
  "format_version": 1,
  "instance": {"arms": [{"kind": "point_mass", "value": 0.5}, {"kind": "point_mass", "value": 0.8}]},
  "policies": [{"name": "constant", "arm": 1}, "uniform"],
  "horizons": [4, 8],
  "replications": 1,
  "base_seed": 7
})";

const char* kBernoulliConfig = R"({
  "instance": {"arms": [{"kind": "bernoulli", "p": 0.9}, {"kind": "bernoulli", "p": 0.6},
                        {"kind": "beta", "alpha": 2, "beta": 3}]},
  "policies": ["ncb", "modified_ncb", "anytime", "ucb", "uniform"],
  "horizons": [64, 200],
  "replications": 12,
  "base_seed": 42,
  "p_means": [0.5, -1]
})";

std::string csv_of(const SweepResult& result) {
  std::ostringstream out;
  write_csv(out, result);
  return out.str();
}

TEST(Config, ParsesFullSchema) {
  const ExperimentConfig cfg = parse_config(R"({
    "format_version": 1,
    "instance": {"arms": [{"kind": "bernoulli", "p": 0.9}, {"kind": "beta", "alpha": 1, "beta": 2},
                          {"kind": "point_mass", "value": 0.3}]},
    "policies": ["ncb", {"name": "modified_ncb", "window": 128, "c": 2}, {"name": "constant", "arm": 2}],
    "horizons": [128, 256],
    "replications": 3,
    "base_seed": 11,
    "p_means": [0, -1],
    "diagnostics": {"c": 2.5},
    "output": {"csv": "a.csv", "json": "b.json"}
  })");
  EXPECT_EQ(cfg.instance.arms.size(), 3u);
  EXPECT_EQ(cfg.policies.size(), 3u);
  EXPECT_EQ(cfg.policies[1].label(), "modified_ncb_w128_c2");
  EXPECT_EQ(cfg.horizons, (std::vector<Round>{128, 256}));
  EXPECT_EQ(cfg.replications, 3u);
  EXPECT_EQ(cfg.base_seed, 11u);
  EXPECT_EQ(cfg.p_means.size(), 2u);
  EXPECT_EQ(cfg.diagnostics_c, 2.5);
  EXPECT_EQ(cfg.csv_name, "a.csv");
  EXPECT_EQ(cfg.json_name, "b.json");
}

TEST(Config, Preset) {
  const ExperimentConfig cfg = parse_config(
      R"({"instance": {"preset": "ucb_counterexample"}, "policies": ["ucb"], "horizons": [256]})");
  EXPECT_TRUE(cfg.instance.ucb_counterexample);
  const BanditInstance inst = cfg.instance.for_horizon(256);
  EXPECT_EQ(inst.k(), 2u);
  EXPECT_NEAR(inst.arm(0).log_mean, -256.0 * std::log(2.0 * std::exp(1.0)), 1e-9);
}

TEST(Config, Rejections) {
  const std::string arms = R"("instance": {"arms": [{"kind": "bernoulli", "p": 0.5}]})";
  const std::vector<std::string> bad = {
      "not json",
      "{" + arms + R"(, "policies": ["ncb"], "horizons": [10], "colour": 1})",
      "{" + arms + R"(, "policies": ["thompson"], "horizons": [10]})",
      "{" + arms + R"(, "policies": ["ncb"], "horizons": []})",
      "{" + arms + R"(, "policies": ["ncb"], "horizons": [20, 10]})",
      "{" + arms + R"(, "policies": ["ncb"], "horizons": [10, 10]})",
      "{" + arms + R"(, "policies": ["ncb"], "horizons": [1]})",
      "{" + arms + R"(, "policies": ["ncb"], "horizons": [10], "replications": 0})",
      "{" + arms + R"(, "policies": ["ncb", "ncb"], "horizons": [10]})",
      "{" + arms + R"(, "policies": ["ncb"], "horizons": [10], "p_means": [2]})",
      "{" + arms + R"(, "policies": ["ncb"], "horizons": [10], "format_version": 2})",
      "{" + arms + R"(, "policies": [{"name": "ncb", "typo": 1}], "horizons": [10]})",
      R"({"instance": {"arms": [{"kind": "bernoulli", "p": 1.5}]}, "policies": ["ncb"], "horizons": [10]})",
      R"({"instance": {"arms": [{"kind": "gauss", "p": 0.5}]}, "policies": ["ncb"], "horizons": [10]})",
      R"({"instance": {"arms": []}, "policies": ["ncb"], "horizons": [10]})",
      R"({"policies": ["ncb"], "horizons": [10]})",
  };
  for (const std::string& text : bad) EXPECT_THROW(parse_config(text), ConfigError) << text;
}

TEST(Config, MissingFileIsIoError) {
  EXPECT_THROW(load_config("/nonexistent/config.json"), IoError);
}

TEST(RunExperiment, PointMassConstantHasZeroRegret) {
  const SweepResult result = run_experiment(parse_config(kPointMassConfig));
  ASSERT_EQ(result.rows.size(), 4u);
  EXPECT_EQ(result.rows[0].policy, "constant_arm1");
  EXPECT_EQ(result.rows[0].report.nash_regret, 0.0);
  EXPECT_EQ(result.rows[0].report.average_regret, 0.0);
  EXPECT_EQ(result.rows[2].policy, "uniform");
  EXPECT_GT(result.rows[2].report.nash_regret, 0.0);
}

TEST(RunExperiment, ExactCsv) {
  const std::string expected =
      "policy,k,T,replications,seed,nash_regret,nash_regret_se,avg_regret,nr0,nr1,welfare_is_zero\n"
      "constant_arm1,2,4,1,7,0,0,0,0,0,false\n"
      "constant_arm1,2,8,1,7,0,0,0,0,0,false\n";
  const std::string csv = csv_of(run_experiment(parse_config(kPointMassConfig)));
  EXPECT_EQ(csv.substr(0, expected.size()), expected);
  EXPECT_EQ(csv.find('\r'), std::string::npos);
}

TEST(RunExperiment, DeterministicAndThreadCountIndependent) {
  const ExperimentConfig cfg = parse_config(kBernoulliConfig);
  const std::string serial = csv_of(run_experiment(cfg, RunOptions{1}));
  EXPECT_EQ(serial, csv_of(run_experiment(cfg, RunOptions{1})));
  EXPECT_EQ(serial, csv_of(run_experiment(cfg, RunOptions{4})));
  EXPECT_EQ(to_json(run_experiment(cfg, RunOptions{1}), cfg).dump(), to_json(run_experiment(cfg, RunOptions{3}), cfg).dump());
}

TEST(RunExperiment, RowsIndependentOfOtherJobs) {
  ExperimentConfig full = parse_config(kBernoulliConfig);
  ExperimentConfig narrow = full;
  narrow.horizons = {200};
  narrow.policies = {full.policies[3]};
  const SweepResult a = run_experiment(full);
  const SweepResult b = run_experiment(narrow);
  ASSERT_EQ(b.rows.size(), 1u);
  const SweepRow* match = nullptr;
  for (const SweepRow& row : a.rows) {
    if (row.policy == "ucb" && row.horizon == 200) match = &row;
  }
  ASSERT_NE(match, nullptr);
  EXPECT_EQ(match->report.nash_regret, b.rows[0].report.nash_regret);
  EXPECT_EQ(match->report.nr0, b.rows[0].report.nr0);
}

TEST(RunExperiment, AverageRegretNeverExceedsNashRegret) {
  const SweepResult result = run_experiment(parse_config(kBernoulliConfig));
  for (const SweepRow& row : result.rows) {
    if (row.report.welfare_is_zero) continue;
    EXPECT_LE(row.report.average_regret, row.report.nash_regret + 1e-12) << row.policy << " T=" << row.horizon;
    EXPECT_EQ(row.report.p_mean_welfare.size(), 2u);
  }
}

TEST(Seeds, DistinctAcrossJobs) {
  std::set<std::uint64_t> seen;
  for (const std::string policy : {"ncb", "ucb"}) {
    for (Round T : {Round{64}, Round{128}}) {
      for (std::size_t r = 0; r < 50; ++r) {
        EXPECT_TRUE(seen.insert(table_seed(1, policy, T, r)).second);
        EXPECT_TRUE(seen.insert(policy_seed(1, policy, T, r)).second);
      }
    }
  }
}

TEST(SlopeFit, ExactPowerLaw) {
  std::vector<std::pair<Round, double>> pts;
  for (Round T = 1024; T <= (Round{1} << 17); T *= 2) pts.emplace_back(T, 3.0 / std::sqrt(static_cast<double>(T)));
  const SlopeFit fit = fit_loglog_slope(pts);
  EXPECT_NEAR(fit.slope, -0.5, 1e-9);
  EXPECT_NEAR(fit.intercept, std::log(3.0), 1e-9);
  EXPECT_NEAR(fit.half_width, 0.0, 1e-9);
  EXPECT_EQ(fit.points_used, pts.size());
  EXPECT_TRUE(fit.warnings.empty());
}

TEST(SlopeFit, ConstantHasZeroSlope) {
  const SlopeFit fit = fit_loglog_slope({{10, 0.2}, {100, 0.2}, {1000, 0.2}});
  EXPECT_NEAR(fit.slope, 0.0, 1e-12);
}

TEST(SlopeFit, NonPositiveExcludedWithWarning) {
  const SlopeFit fit = fit_loglog_slope({{10, 0.0}, {20, 0.5}, {40, 0.25}, {80, 0.125}});
  EXPECT_EQ(fit.points_used, 3u);
  EXPECT_EQ(fit.warnings.size(), 1u);
  EXPECT_NEAR(fit.slope, -1.0, 1e-12);
}

TEST(SlopeFit, NoisyHalfWidthMatchesStudentT) {
  // Residuals +e, -e, +e, -e around slope -1 on ln T = 0, 1, 2, 3.
  const double e = 0.1;
  std::vector<std::pair<Round, double>> pts;
  const double lnT[] = {std::log(10.0), std::log(100.0), std::log(1000.0), std::log(10000.0)};
  for (int i = 0; i < 4; ++i) {
    const double ln_nr = -lnT[i] + ((i % 2 == 0) ? e : -e);
    pts.emplace_back(static_cast<Round>(std::llround(std::exp(lnT[i]))), std::exp(ln_nr));
  }
  const SlopeFit fit = fit_loglog_slope(pts);
  // Independent OLS by hand.
  double xbar = 0.0, ybar = 0.0;
  for (int i = 0; i < 4; ++i) {
    xbar += lnT[i] / 4.0;
    ybar += std::log(pts[i].second) / 4.0;
  }
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < 4; ++i) {
    sxx += (lnT[i] - xbar) * (lnT[i] - xbar);
    sxy += (lnT[i] - xbar) * (std::log(pts[i].second) - ybar);
  }
  const double slope = sxy / sxx;
  const double intercept = ybar - slope * xbar;
  double sse = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double r = std::log(pts[i].second) - intercept - slope * lnT[i];
    sse += r * r;
  }
  const double se = std::sqrt(sse / 2.0 / sxx);
  // t quantile 0.975 with 2 degrees of freedom.
  EXPECT_NEAR(fit.slope, slope, 1e-12);
  EXPECT_NEAR(fit.half_width, 4.302652729911275 * se, 1e-9);
}

TEST(SlopeFit, TooFewPoints) {
  EXPECT_THROW(fit_loglog_slope({{10, 0.5}, {20, 0.4}}), NotEnoughData);
  EXPECT_THROW(fit_loglog_slope({{10, 0.5}, {20, 0.4}, {40, 0.0}}), NotEnoughData);
}

TEST(Counterexample, SmallHorizonNcbIsUniform) {
  const CounterexampleReport rep = counterexample_command(256, 20, 3);
  EXPECT_EQ(rep.ncb_phase1_rounds, 256u);
  EXPECT_TRUE(rep.precondition_met);
  EXPECT_FALSE(rep.mu1_clamped);
  EXPECT_EQ(rep.ucb.replications, 20u);
}

TEST(Counterexample, UcbCollapsesNcbDoesNot) {
  const CounterexampleReport rep = counterexample_command(16384, 20, 0);
  EXPECT_TRUE(rep.mu1_clamped);
  EXPECT_GE(rep.ucb.nash_regret, 0.9);
  EXPECT_LE(rep.ncb.nash_regret, 0.6);
}

TEST(Diagnose, ReportsEventsAndTau) {
  const ExperimentConfig cfg = parse_config(R"({
    "instance": {"arms": [{"kind": "bernoulli", "p": 0.9}, {"kind": "bernoulli", "p": 0.2}]},
    "policies": ["ncb"], "horizons": [10000], "replications": 4, "base_seed": 1})");
  const auto diags = diagnose(cfg);
  ASSERT_EQ(diags.size(), 1u);
  ASSERT_TRUE(diags[0].g_events.has_value());
  ASSERT_TRUE(diags[0].e_events.has_value());
  EXPECT_EQ(diags[0].g_events->back().holds.size(), 4u);
  EXPECT_EQ(diags[0].taus.size(), 4u);
  EXPECT_EQ(to_json(diags, cfg).at("format_version"), kFormatVersion);
}

TEST(ParallelFor, CoversEveryIndexAndRethrows) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) {
                 if (i == 5) throw InvalidParameter("boom");
               }),
               InvalidParameter);
}

TEST(ReportIo, FormatReal) {
  EXPECT_EQ(format_real(0.1), "0.10000000000000001");
  EXPECT_EQ(format_real(0.0), "0");
  EXPECT_EQ(format_real(0.25), "0.25");
}

}  // namespace
}  // namespace nashbandit
