#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nashbandit/bandit.hpp"

namespace nashbandit {

// Outcome of one concentration event over a set of replications.
struct EventReport {
  std::string event_name;
  std::vector<bool> holds;  // one entry per replication
  double failure_rate = 0.0;
  double bound = 0.0;       // probability bound on failure from the analysis
  bool applicable = true;   // false when no arm falls under the event's threshold

  // Appends other's replications; names must match.
  void merge(const EventReport& other);
  std::size_t failures() const;
};

// Reports in a fixed order: sub-events 1..3, then their conjunction.
using EventSet = std::vector<EventReport>;

// Concatenates replication results event by event.
void merge_events(EventSet& into, const EventSet& from);

// Thresholds used by the NCB good event for (k, T).
struct NcbEventThresholds {
  double phase1_rounds = 0.0;   // T~
  std::size_t min_samples = 0;  // floor(T~ / 2k)
  double small_mean = 0.0;      // 6 sqrt(k ln k ln T) / sqrt(T)
  double small_mean_cap = 0.0;  // 9 sqrt(k ln k ln T) / sqrt(T)
};

NcbEventThresholds ncb_event_thresholds(std::size_t k, Round horizon, Round phase1_rounds);

// Evaluates G1, G2, G3 and G = G1 & G2 & G3 for one replication. G1 reads
// the Phase-I pulls; G2 and G3 read prefix means of every table row over
// s in [floor(T~/2k), T]. Arms exactly at the small-mean threshold belong to
// G3. Throws NotApplicable when phase1_rounds < 1.
EventSet check_G(const RewardTable& table, const BanditInstance& instance, std::span<const ArmIndex> phase1_pulls,
                 Round phase1_rounds);

struct ModifiedNcbEventThresholds {
  double s_value = 0.0;          // S = c^2 ln T / mu*
  std::size_t min_rounds = 0;    // floor(128 k S), E1
  std::size_t min_samples = 0;   // floor(64 S), E2 and E3
  double small_mean = 0.0;       // mu* / 64
  double small_mean_cap = 0.0;   // mu* / 32
};

// Throws NotApplicable when mu* = 0.
ModifiedNcbEventThresholds modified_ncb_event_thresholds(const BanditInstance& instance, Round horizon, double c);

// Evaluates E1, E2, E3 and E for one replication. uniform_pulls is the arm
// sequence of uniform sampling; E1 covers every prefix length r with
// floor(128 k S) <= r <= uniform_pulls.size(). Throws NotApplicable when
// mu* = 0.
EventSet check_E(const RewardTable& table, const BanditInstance& instance, double c,
                 std::span<const ArmIndex> uniform_pulls);

struct TauReport {
  Round tau = 0;
  double lower = 0.0;    // 128 k S
  double upper = 0.0;    // 968 k S
  double s_value = 0.0;  // c^2 ln T / mu*
  double threshold = 0.0;  // 420 c^2 ln W
  bool truncated = false;  // threshold not exceeded within W rounds

  bool in_bracket() const { return static_cast<double>(tau) >= lower && static_cast<double>(tau) <= upper; }
};

// Runs the uniform phase of Modified NCB with window W on the given table
// (which needs at least W columns) and reports how many rounds it took for
// some arm's reward sum to exceed the stopping threshold.
TauReport measure_tau(const RewardTable& table, const BanditInstance& instance, Round window, Round horizon, double c,
                      std::uint64_t policy_seed);

// Same, on a fresh table of W columns drawn from `seed`.
TauReport measure_tau(const BanditInstance& instance, Round window, Round horizon, double c, std::uint64_t seed);

// (1 - x)^a >= 1 - 2 a x with slack 1e-12, for x in [0, 1/2], a in [0, 1].
// Throws InvalidParameter outside that box.
bool power_bound_holds(double x, double a);

}  // namespace nashbandit
