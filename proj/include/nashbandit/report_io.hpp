#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "nashbandit/harness.hpp"

namespace nashbandit {

inline constexpr const char* kCsvHeader =
    "policy,k,T,replications,seed,nash_regret,nash_regret_se,avg_regret,nr0,nr1,welfare_is_zero";

// %.17g; the CSV and JSON writers print every real this way.
std::string format_real(double x);

// Header plus one LF-terminated row per (policy, T).
void write_csv(std::ostream& out, const SweepResult& result);

nlohmann::json to_json(const RegretReport& report);
nlohmann::json to_json(const EventReport& report);
nlohmann::json to_json(const TauReport& report);
nlohmann::json to_json(const SlopeFit& fit);
nlohmann::json to_json(const SweepResult& result, const ExperimentConfig& config);
nlohmann::json to_json(const CounterexampleReport& report);
nlohmann::json to_json(const std::vector<HorizonDiagnostics>& diagnostics, const ExperimentConfig& config);

// Writes text to path (binary mode, so LF stays LF). Throws IoError.
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace nashbandit
