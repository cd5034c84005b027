#include "alsim/case_base.hpp"

#include <cmath>
#include <limits>

#include "alsim/errors.hpp"
#include "alsim/json_io.hpp"

namespace alsim {

double case_distance(const EnvironmentParams& a, const EnvironmentParams& b,
                     const CaseWeights& weights) {
  const double dc = (a.target_cruise_speed - b.target_cruise_speed) / weights.cruise;
  const double df = (a.target_flee_speed - b.target_flee_speed) / weights.flee;
  const double dt = (a.evasion_threshold - b.evasion_threshold) / weights.threshold;
  return std::sqrt(dc * dc + df * df + dt * dt);
}

std::optional<Case> nn_retrieve(CaseBase& base, const EnvironmentParams& query) {
  std::size_t best = base.cases.size();
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < base.cases.size(); ++i) {
    const double d = case_distance(base.cases[i].env_key, query, base.weights);
    if (d < best_dist) {  // strict: ties keep the earliest stored
      best_dist = d;
      best = i;
    }
  }
  if (best == base.cases.size() || best_dist > base.retrieval_radius)
    return std::nullopt;
  base.cases[best].last_touch = ++base.clock;
  return base.cases[best];
}

void store_case(CaseBase& base, Case c) {
  c.last_touch = ++base.clock;
  for (Case& existing : base.cases) {
    if (case_distance(existing.env_key, c.env_key, base.weights) <= base.merge_radius) {
      existing = std::move(c);
      return;
    }
  }
  base.cases.push_back(std::move(c));
  while (base.cases.size() > base.capacity) {
    std::size_t victim = 0;
    for (std::size_t i = 1; i < base.cases.size(); ++i)
      if (base.cases[i].last_touch < base.cases[victim].last_touch) victim = i;
    base.cases.erase(base.cases.begin() + static_cast<std::ptrdiff_t>(victim));
  }
}

namespace {
constexpr int kCaseFileVersion = 1;
}

void save_case_base(const CaseBase& base, const std::string& path) {
  jsonio::json j;
  j["version"] = kCaseFileVersion;
  j["capacity"] = base.capacity;
  j["merge_radius"] = base.merge_radius;
  j["retrieval_radius"] = base.retrieval_radius;
  j["weights"] = jsonio::json{{"cruise", base.weights.cruise},
                              {"flee", base.weights.flee},
                              {"threshold", base.weights.threshold}};
  j["clock"] = base.clock;
  jsonio::json cases = jsonio::json::array();
  for (const Case& c : base.cases) {
    jsonio::json seeds = jsonio::json::array();
    for (const StoredStrategy& s : c.seed_strategies)
      seeds.push_back(jsonio::json{{"fitness", s.fitness},
                                   {"strategy", jsonio::strategy_to_json(s.strategy)}});
    cases.push_back(jsonio::json{{"env_key", jsonio::env_to_json(c.env_key)},
                                 {"stored_at_epoch", c.stored_at_epoch},
                                 {"last_touch", c.last_touch},
                                 {"seed_strategies", std::move(seeds)}});
  }
  j["cases"] = std::move(cases);
  jsonio::write_file(path, j.dump(2) + "\n");
}

CaseBase load_case_base(const std::string& path) {
  jsonio::json j;
  try {
    j = jsonio::json::parse(jsonio::read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("case_base", std::string("invalid JSON: ") + e.what());
  }
  jsonio::reject_unknown_keys(j, {"version", "capacity", "merge_radius",
                                  "retrieval_radius", "weights", "clock", "cases"});
  if (jsonio::get_long(j, "version") != kCaseFileVersion)
    throw ConfigError("version", "unsupported case file version");

  CaseBase base;
  base.capacity = static_cast<std::size_t>(jsonio::get_long(j, "capacity"));
  base.merge_radius = jsonio::get_double(j, "merge_radius");
  base.retrieval_radius = jsonio::get_double(j, "retrieval_radius");
  const jsonio::json& w = jsonio::require(j, "weights");
  jsonio::reject_unknown_keys(w, {"cruise", "flee", "threshold"});
  base.weights = {jsonio::get_double(w, "cruise"), jsonio::get_double(w, "flee"),
                  jsonio::get_double(w, "threshold")};
  base.clock = jsonio::get_long(j, "clock");

  const jsonio::json& cases = jsonio::require(j, "cases");
  if (!cases.is_array()) throw ConfigError("cases", "expected an array");
  for (const jsonio::json& jc : cases) {
    jsonio::reject_unknown_keys(
        jc, {"env_key", "stored_at_epoch", "last_touch", "seed_strategies"});
    Case c;
    c.env_key = jsonio::env_from_json(jsonio::require(jc, "env_key"));
    c.stored_at_epoch = jsonio::get_long(jc, "stored_at_epoch");
    c.last_touch = jsonio::get_long(jc, "last_touch");
    const jsonio::json& seeds = jsonio::require(jc, "seed_strategies");
    if (!seeds.is_array()) throw ConfigError("seed_strategies", "expected an array");
    for (const jsonio::json& js : seeds) {
      jsonio::reject_unknown_keys(js, {"fitness", "strategy"});
      StoredStrategy s;
      s.fitness = jsonio::get_double(js, "fitness");
      s.strategy = jsonio::strategy_from_json(jsonio::require(js, "strategy"));
      c.seed_strategies.push_back(std::move(s));
    }
    base.cases.push_back(std::move(c));
  }
  return base;
}

}  // namespace alsim
