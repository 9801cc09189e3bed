#include "nashbandit/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "nashbandit/errors.hpp"

namespace nashbandit {

using nlohmann::json;

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(std::ostream& out, const SweepResult& result) {
  out << kCsvHeader << '\n';
  for (const SweepRow& row : result.rows) {
    const RegretReport& r = row.report;
    out << row.policy << ',' << row.k << ',' << row.horizon << ',' << r.replications << ',' << row.seed << ','
        << format_real(r.nash_regret) << ',' << format_real(r.nash_regret_se) << ',' << format_real(r.average_regret)
        << ',' << format_real(r.nr0) << ',' << format_real(r.nr1) << ',' << (r.welfare_is_zero ? "true" : "false")
        << '\n';
  }
}

json to_json(const RegretReport& r) {
  json j = {{"T", r.horizon},
            {"replications", r.replications},
            {"optimal_mean", r.optimal_mean},
            {"nash_regret", r.nash_regret},
            {"nash_regret_se", r.nash_regret_se},
            {"avg_regret", r.average_regret},
            {"avg_regret_se", r.average_regret_se},
            {"nr0", r.nr0},
            {"nr0_se", r.nr0_se},
            {"nr1", r.nr1},
            {"nr1_se", r.nr1_se},
            {"welfare_is_zero", r.welfare_is_zero}};
  if (!r.p_mean_welfare.empty()) {
    json pm = json::object();
    for (const auto& [p, v] : r.p_mean_welfare) pm[format_real(p)] = v;
    j["p_mean_welfare"] = pm;
  }
  return j;
}

json to_json(const EventReport& e) {
  return {{"event", e.event_name},
          {"replications", e.holds.size()},
          {"failures", e.failures()},
          {"failure_rate", e.failure_rate},
          {"bound", e.bound},
          {"applicable", e.applicable}};
}

json to_json(const TauReport& t) {
  return {{"tau", t.tau},
          {"lower", t.lower},
          {"upper", t.upper},
          {"S", t.s_value},
          {"threshold", t.threshold},
          {"truncated", t.truncated},
          {"in_bracket", t.in_bracket()}};
}

json to_json(const SlopeFit& f) {
  return {{"slope", f.slope},
          {"intercept", f.intercept},
          {"half_width_95", f.half_width},
          {"points", f.points_used},
          {"warnings", f.warnings}};
}

json to_json(const SweepResult& result, const ExperimentConfig& config) {
  json rows = json::array();
  for (const SweepRow& row : result.rows) {
    json j = to_json(row.report);
    j["policy"] = row.policy;
    j["k"] = row.k;
    j["seed"] = row.seed;
    if (auto it = result.counterexample_clamped.find(row.horizon); it != result.counterexample_clamped.end()) {
      j["mu1_clamped"] = it->second;
    }
    rows.push_back(std::move(j));
  }
  json slopes = json::object();
  for (const auto& [policy, fit] : result.slopes) slopes[policy] = to_json(fit);
  return {{"format_version", kFormatVersion},
          {"base_seed", config.base_seed},
          {"replications", config.replications},
          {"rows", rows},
          {"slopes", slopes}};
}

json to_json(const CounterexampleReport& r) {
  return {{"format_version", kFormatVersion},
          {"T", r.horizon},
          {"replications", r.replications},
          {"seed", r.seed},
          {"log_mu1", r.log_mu1},
          {"mu1_clamped", r.mu1_clamped},
          {"precondition_T_gt_25lnT", r.precondition_met},
          {"ncb_phase1_rounds", r.ncb_phase1_rounds},
          {"ucb", to_json(r.ucb)},
          {"ncb", to_json(r.ncb)}};
}

json to_json(const std::vector<HorizonDiagnostics>& diagnostics, const ExperimentConfig& config) {
  json per_t = json::array();
  for (const HorizonDiagnostics& d : diagnostics) {
    json j = {{"T", d.horizon}, {"phase1_rounds", d.phase1_rounds}};
    if (d.g_events) {
      json ev = json::array();
      for (const EventReport& e : *d.g_events) ev.push_back(to_json(e));
      j["G"] = ev;
    } else {
      j["G"] = nullptr;
      j["G_note"] = d.g_note;
    }
    if (d.e_events) {
      json ev = json::array();
      for (const EventReport& e : *d.e_events) ev.push_back(to_json(e));
      j["E"] = ev;
      json taus = json::array();
      std::size_t in_bracket = 0;
      std::size_t truncated = 0;
      for (const TauReport& t : d.taus) {
        taus.push_back(to_json(t));
        in_bracket += t.in_bracket() ? 1 : 0;
        truncated += t.truncated ? 1 : 0;
      }
      j["tau"] = {{"runs", taus}, {"in_bracket", in_bracket}, {"truncated", truncated}};
    } else {
      j["E"] = nullptr;
      j["E_note"] = d.e_note;
    }
    per_t.push_back(std::move(j));
  }
  return {{"format_version", kFormatVersion},
          {"base_seed", config.base_seed},
          {"replications", config.replications},
          {"diagnostics", per_t}};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open output file", path.string());
  out << text;
  if (!out) throw IoError("failed writing output file", path.string());
}

}  // namespace nashbandit
