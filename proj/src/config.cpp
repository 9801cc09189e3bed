#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"
#include "nashbandit/errors.hpp"
#include "nashbandit/harness.hpp"

namespace nashbandit {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  const std::set<std::string> known(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!known.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

double number(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj.at(key).is_number()) throw ConfigError(where + " needs numeric '" + key + "'");
  return obj.at(key).get<double>();
}

std::uint64_t unsigned_integer(const json& v, const std::string& where) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw ConfigError(where + " must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

ArmSpec parse_arm(const json& arm, const std::string& where) {
  if (!arm.is_object() || !arm.contains("kind") || !arm.at("kind").is_string()) {
    throw ConfigError(where + " needs a string 'kind'");
  }
  const std::string kind = arm.at("kind").get<std::string>();
  try {
    if (kind == "bernoulli") {
      reject_unknown_keys(arm, {"kind", "p"}, where);
      return ArmSpec::bernoulli(number(arm, "p", where));
    }
    if (kind == "beta") {
      reject_unknown_keys(arm, {"kind", "alpha", "beta"}, where);
      return ArmSpec::beta_dist(number(arm, "alpha", where), number(arm, "beta", where));
    }
    if (kind == "point_mass") {
      reject_unknown_keys(arm, {"kind", "value"}, where);
      return ArmSpec::point_mass(number(arm, "value", where));
    }
  } catch (const InvalidInstance& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError(where + ": unknown arm kind '" + kind + "'");
}

PolicySpec parse_policy(const json& p, const std::string& where) {
  PolicySpec spec;
  if (p.is_string()) {
    spec.name = p.get<std::string>();
  } else {
    reject_unknown_keys(p, {"name", "c", "window", "arm"}, where);
    if (!p.contains("name") || !p.at("name").is_string()) throw ConfigError(where + " needs a string 'name'");
    spec.name = p.at("name").get<std::string>();
    if (p.contains("c")) {
      spec.c = number(p, "c", where);
      if (!(spec.c > 0.0)) throw ConfigError(where + ": c must be positive");
    }
    if (p.contains("window")) {
      spec.window = unsigned_integer(p.at("window"), where + ".window");
      if (*spec.window == 0) throw ConfigError(where + ": window must be >= 1");
    }
    if (p.contains("arm")) spec.arm = unsigned_integer(p.at("arm"), where + ".arm");
  }
  if (!is_known_policy(spec.name)) throw ConfigError("unknown policy '" + spec.name + "'");
  return spec;
}

}  // namespace

BanditInstance InstanceConfig::for_horizon(Round horizon) const {
  if (ucb_counterexample) return counterexample_instance(horizon).instance;
  return make_instance(arms);
}

ExperimentConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  reject_unknown_keys(doc, {"format_version", "instance", "policies", "horizons", "replications", "base_seed",
                            "p_means", "diagnostics", "output"},
                      "config");
  if (doc.contains("format_version") && doc.at("format_version") != kFormatVersion) {
    throw ConfigError("unsupported format_version");
  }

  ExperimentConfig cfg;
  if (!doc.contains("instance")) throw ConfigError("config needs 'instance'");
  const json& inst = doc.at("instance");
  reject_unknown_keys(inst, {"arms", "preset"}, "instance");
  if (inst.contains("preset")) {
    if (inst.contains("arms")) throw ConfigError("instance takes either 'arms' or 'preset'");
    if (inst.at("preset") != "ucb_counterexample") throw ConfigError("unknown instance preset");
    cfg.instance.ucb_counterexample = true;
  } else {
    if (!inst.contains("arms") || !inst.at("arms").is_array() || inst.at("arms").empty()) {
      throw ConfigError("instance.arms must be a nonempty array");
    }
    for (std::size_t i = 0; i < inst.at("arms").size(); ++i) {
      cfg.instance.arms.push_back(parse_arm(inst.at("arms").at(i), "instance.arms[" + std::to_string(i) + "]"));
    }
  }

  if (!doc.contains("policies") || !doc.at("policies").is_array() || doc.at("policies").empty()) {
    throw ConfigError("config needs a nonempty 'policies' array");
  }
  std::set<std::string> labels;
  for (std::size_t i = 0; i < doc.at("policies").size(); ++i) {
    PolicySpec spec = parse_policy(doc.at("policies").at(i), "policies[" + std::to_string(i) + "]");
    if (!labels.insert(spec.label()).second) throw ConfigError("policy '" + spec.label() + "' listed twice");
    cfg.policies.push_back(std::move(spec));
  }

  if (!doc.contains("horizons") || !doc.at("horizons").is_array() || doc.at("horizons").empty()) {
    throw ConfigError("config needs a nonempty 'horizons' array");
  }
  for (const json& h : doc.at("horizons")) {
    const Round T = unsigned_integer(h, "horizons[]");
    if (T < 2) throw ConfigError("horizons must be >= 2");
    if (!cfg.horizons.empty() && T <= cfg.horizons.back()) throw ConfigError("horizons must be strictly increasing");
    cfg.horizons.push_back(T);
  }

  if (doc.contains("replications")) cfg.replications = unsigned_integer(doc.at("replications"), "replications");
  if (cfg.replications < 1) throw ConfigError("replications must be >= 1");
  if (doc.contains("base_seed")) cfg.base_seed = unsigned_integer(doc.at("base_seed"), "base_seed");

  if (doc.contains("p_means")) {
    if (!doc.at("p_means").is_array()) throw ConfigError("p_means must be an array");
    for (const json& p : doc.at("p_means")) {
      if (!p.is_number()) throw ConfigError("p_means entries must be numbers");
      const double v = p.get<double>();
      if (v > 1.0) throw ConfigError("p_means entries must be <= 1");
      cfg.p_means.push_back(v);
    }
  }

  if (doc.contains("diagnostics")) {
    const json& d = doc.at("diagnostics");
    reject_unknown_keys(d, {"c"}, "diagnostics");
    if (d.contains("c")) cfg.diagnostics_c = number(d, "c", "diagnostics");
    if (!(cfg.diagnostics_c > 0.0)) throw ConfigError("diagnostics.c must be positive");
  }

  if (doc.contains("output")) {
    const json& o = doc.at("output");
    reject_unknown_keys(o, {"csv", "json"}, "output");
    if (o.contains("csv")) cfg.csv_name = o.at("csv").get<std::string>();
    if (o.contains("json")) cfg.json_name = o.at("json").get<std::string>();
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config", path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace nashbandit
