#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nashbandit {

struct SelfTestResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Quick property sweeps over the library: the numeric inequality used by
// the analysis, index monotonicity, AM-GM and power-mean ordering, log-domain
// welfare, and the anytime epoch schedule.
std::vector<SelfTestResult> run_selftest(std::uint64_t seed);

}  // namespace nashbandit
