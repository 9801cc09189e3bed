#include "nashbandit/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nashbandit/errors.hpp"
#include "nashbandit/policies.hpp"

namespace nashbandit {

namespace {

EventReport single(std::string name, bool holds, double bound, bool applicable) {
  EventReport r;
  r.event_name = std::move(name);
  r.holds = {holds};
  r.failure_rate = holds ? 0.0 : 1.0;
  r.bound = bound;
  r.applicable = applicable;
  return r;
}

std::size_t floor_count(double x) { return x <= 0.0 ? 0 : static_cast<std::size_t>(std::floor(x)); }

// Scans prefix means of one table row over s in [s_min, T]; `ok(s, mean)`
// must hold for every s.
template <typename Pred>
bool all_prefixes(const RewardTable& table, ArmIndex arm, std::size_t s_min, Pred ok) {
  const std::size_t T = table.horizon();
  const auto row = table.row(arm);
  s_min = std::max<std::size_t>(s_min, 1);
  double sum = 0.0;
  for (std::size_t s = 1; s <= T; ++s) {
    sum += row(static_cast<Eigen::Index>(s - 1));
    if (s >= s_min && !ok(s, sum / static_cast<double>(s))) return false;
  }
  return true;
}

}  // namespace

void EventReport::merge(const EventReport& other) {
  if (event_name.empty()) event_name = other.event_name;
  if (other.event_name != event_name) throw InvalidParameter("cannot merge event " + other.event_name + " into " + event_name);
  if (holds.empty()) {
    bound = other.bound;
    applicable = other.applicable;
  } else {
    applicable = applicable || other.applicable;
  }
  holds.insert(holds.end(), other.holds.begin(), other.holds.end());
  failure_rate = holds.empty() ? 0.0 : static_cast<double>(failures()) / static_cast<double>(holds.size());
}

std::size_t EventReport::failures() const {
  return static_cast<std::size_t>(std::count(holds.begin(), holds.end(), false));
}

void merge_events(EventSet& into, const EventSet& from) {
  if (into.empty()) {
    into = from;
    return;
  }
  if (into.size() != from.size()) throw InvalidParameter("event sets differ in size");
  for (std::size_t i = 0; i < into.size(); ++i) into[i].merge(from[i]);
}

NcbEventThresholds ncb_event_thresholds(std::size_t k, Round horizon, Round phase1_rounds) {
  const double kd = static_cast<double>(k);
  const double td = static_cast<double>(horizon);
  const double root = std::sqrt(kd * std::log(kd) * std::log(td)) / std::sqrt(td);
  NcbEventThresholds th;
  th.phase1_rounds = static_cast<double>(phase1_rounds);
  th.min_samples = floor_count(th.phase1_rounds / (2.0 * kd));
  th.small_mean = 6.0 * root;
  th.small_mean_cap = 9.0 * root;
  return th;
}

EventSet check_G(const RewardTable& table, const BanditInstance& instance, std::span<const ArmIndex> phase1_pulls,
                 Round phase1_rounds) {
  if (phase1_rounds < 1) throw NotApplicable("good event G needs a Phase I of at least one round");
  const std::size_t k = instance.k();
  if (table.arms() != k) throw InvalidParameter("table and instance disagree on k");
  const Round T = table.horizon();
  const double log_T = std::log(static_cast<double>(T));
  const NcbEventThresholds th = ncb_event_thresholds(k, T, phase1_rounds);

  std::vector<std::size_t> counts(k, 0);
  const std::size_t n_phase1 = std::min<std::size_t>(phase1_pulls.size(), phase1_rounds);
  for (std::size_t t = 0; t < n_phase1; ++t) ++counts.at(phase1_pulls[t]);
  bool g1 = true;
  for (std::size_t c : counts) g1 = g1 && c >= th.min_samples;

  bool g2 = true;
  bool g3 = true;
  bool g2_applies = false;
  bool g3_applies = false;
  for (ArmIndex i = 0; i < k; ++i) {
    const double mu = instance.arm(i).mean;
    if (mu > th.small_mean) {
      g2_applies = true;
      g2 = g2 && all_prefixes(table, i, th.min_samples, [&](std::size_t s, double m) {
             return std::abs(mu - m) <= 3.0 * std::sqrt(mu * log_T / static_cast<double>(s));
           });
    } else {
      g3_applies = true;
      g3 = g3 && all_prefixes(table, i, th.min_samples, [&](std::size_t, double m) { return m <= th.small_mean_cap; });
    }
  }
  const double Td = static_cast<double>(T);
  return {single("G1", g1, 1.0 / Td, true), single("G2", g2, 2.0 / Td, g2_applies),
          single("G3", g3, 1.0 / Td, g3_applies), single("G", g1 && g2 && g3, 4.0 / Td, true)};
}

ModifiedNcbEventThresholds modified_ncb_event_thresholds(const BanditInstance& instance, Round horizon, double c) {
  const double mu_star = instance.optimal_mean();
  if (!(mu_star > 0.0)) throw NotApplicable("S = c^2 ln T / mu* is undefined for mu* = 0");
  ModifiedNcbEventThresholds th;
  th.s_value = c * c * std::log(static_cast<double>(horizon)) / mu_star;
  th.min_rounds = floor_count(128.0 * static_cast<double>(instance.k()) * th.s_value);
  th.min_samples = floor_count(64.0 * th.s_value);
  th.small_mean = mu_star / 64.0;
  th.small_mean_cap = mu_star / 32.0;
  return th;
}

EventSet check_E(const RewardTable& table, const BanditInstance& instance, double c,
                 std::span<const ArmIndex> uniform_pulls) {
  const std::size_t k = instance.k();
  if (table.arms() != k) throw InvalidParameter("table and instance disagree on k");
  const Round T = table.horizon();
  const double log_T = std::log(static_cast<double>(T));
  const ModifiedNcbEventThresholds th = modified_ncb_event_thresholds(instance, T, c);
  const double kd = static_cast<double>(k);

  bool e1 = true;
  const std::size_t r_min = std::max<std::size_t>(th.min_rounds, 1);
  const bool e1_applies = uniform_pulls.size() >= r_min;
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t r = 1; r <= uniform_pulls.size() && e1; ++r) {
    ++counts.at(uniform_pulls[r - 1]);
    if (r < r_min) continue;
    const double lo = static_cast<double>(r) / (2.0 * kd);
    const double hi = 3.0 * static_cast<double>(r) / (2.0 * kd);
    for (std::size_t n : counts) {
      const double nd = static_cast<double>(n);
      if (nd < lo || nd > hi) {
        e1 = false;
        break;
      }
    }
  }

  bool e2 = true;
  bool e3 = true;
  bool e2_applies = false;
  bool e3_applies = false;
  for (ArmIndex i = 0; i < k; ++i) {
    const double mu = instance.arm(i).mean;
    if (mu > th.small_mean) {
      e2_applies = true;
      e2 = e2 && all_prefixes(table, i, th.min_samples, [&](std::size_t s, double m) {
             return std::abs(mu - m) <= c * std::sqrt(mu * log_T / static_cast<double>(s));
           });
    } else {
      e3_applies = true;
      e3 = e3 && all_prefixes(table, i, th.min_samples, [&](std::size_t, double m) { return m < th.small_mean_cap; });
    }
  }
  const double Td = static_cast<double>(T);
  return {single("E1", e1, 1.0 / Td, e1_applies), single("E2", e2, 2.0 / Td, e2_applies),
          single("E3", e3, 1.0 / Td, e3_applies), single("E", e1 && e2 && e3, 4.0 / Td, true)};
}

TauReport measure_tau(const RewardTable& table, const BanditInstance& instance, Round window, Round horizon, double c,
                      std::uint64_t policy_seed) {
  const ModifiedNcbEventThresholds th = modified_ncb_event_thresholds(instance, horizon, c);
  if (table.horizon() < window) throw InvalidHorizon("tau measurement needs a table with at least W columns");
  const std::size_t k = instance.k();
  ModifiedNcbPolicy policy(ModifiedNcbConfig::make(k, window, c), policy_seed);

  TauReport rep;
  rep.s_value = th.s_value;
  rep.lower = 128.0 * static_cast<double>(k) * th.s_value;
  rep.upper = 968.0 * static_cast<double>(k) * th.s_value;
  rep.threshold = policy.config().stop_threshold;

  std::vector<std::size_t> cursor(k, 0);
  for (Round t = 1; t <= window; ++t) {
    const ArmIndex arm = policy.select_arm(t);
    if (policy.phase() == Phase::Exploit) {
      rep.tau = t - 1;
      return rep;
    }
    policy.update(arm, table.entry(arm, cursor[arm]++));
  }
  rep.tau = window;
  rep.truncated = !modified_ncb_phase1_done(policy.stats(), rep.threshold);
  return rep;
}

TauReport measure_tau(const BanditInstance& instance, Round window, Round horizon, double c, std::uint64_t seed) {
  const RewardTable table = build_reward_table(instance, window, derive_seed(seed, {0}));
  return measure_tau(table, instance, window, horizon, c, derive_seed(seed, {1}));
}

bool power_bound_holds(double x, double a) {
  if (!(x >= 0.0 && x <= 0.5) || !(a >= 0.0 && a <= 1.0)) {
    throw InvalidParameter("power_bound_holds needs x in [0, 1/2] and a in [0, 1]");
  }
  return std::pow(1.0 - x, a) >= 1.0 - 2.0 * a * x - 1e-12;
}

}  // namespace nashbandit
