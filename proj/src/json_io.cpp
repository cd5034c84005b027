#include "alsim/json_io.hpp"

#include <fstream>
#include <sstream>

#include "alsim/errors.hpp"

namespace alsim::jsonio {

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) {
        known = true;
        break;
      }
    if (!known) throw ConfigError(item.key(), "unknown key");
  }
}

const json& require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(key, "missing key");
  return *it;
}

double get_double(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  return v.get<double>();
}

long get_long(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
  return v.get<long>();
}

std::uint64_t get_u64(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (!v.is_number_unsigned() && !v.is_number_integer())
    throw ConfigError(key, "expected a non-negative integer");
  if (v.is_number_integer() && v.get<long long>() < 0)
    throw ConfigError(key, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string get_string(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (!v.is_string()) throw ConfigError(key, "expected a string");
  return v.get<std::string>();
}

json env_to_json(const EnvironmentParams& env) {
  return json{{"target_cruise_speed", env.target_cruise_speed},
              {"target_flee_speed", env.target_flee_speed},
              {"evasion_threshold", env.evasion_threshold},
              {"sensor_range", env.sensor_range},
              {"tracker_max_speed", env.tracker_max_speed},
              {"tracker_max_turn", env.tracker_max_turn},
              {"target_heading_jitter", env.target_heading_jitter}};
}

EnvironmentParams env_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("env", "expected an object");
  reject_unknown_keys(j, {"target_cruise_speed", "target_flee_speed",
                          "evasion_threshold", "sensor_range", "tracker_max_speed",
                          "tracker_max_turn", "target_heading_jitter"});
  EnvironmentParams env;
  env.target_cruise_speed = get_double(j, "target_cruise_speed");
  env.target_flee_speed = get_double(j, "target_flee_speed");
  env.evasion_threshold = get_double(j, "evasion_threshold");
  env.sensor_range = get_double(j, "sensor_range");
  env.tracker_max_speed = get_double(j, "tracker_max_speed");
  env.tracker_max_turn = get_double(j, "tracker_max_turn");
  env.target_heading_jitter = get_double(j, "target_heading_jitter");
  env.validate();
  return env;
}

json action_to_json(const Action& a) {
  return json{{"turn", a.turn}, {"speed", a.speed}};
}

Action action_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("action", "expected an object");
  reject_unknown_keys(j, {"turn", "speed"});
  return Action{get_double(j, "turn"), get_double(j, "speed")};
}

namespace {

const char* kind_name(KindMatch k) {
  switch (k) {
    case KindMatch::Contact: return "contact";
    case KindMatch::Lost: return "lost";
    default: return "any";
  }
}

KindMatch kind_from_name(const std::string& s) {
  if (s == "contact") return KindMatch::Contact;
  if (s == "lost") return KindMatch::Lost;
  if (s == "any") return KindMatch::Any;
  throw ConfigError("kind", "expected contact|lost|any");
}

}  // namespace

json strategy_to_json(const Strategy& s) {
  json rules = json::array();
  for (const Rule& r : s.rules) {
    rules.push_back(json{{"kind", kind_name(r.kind_match)},
                         {"range", json::array({r.range_lo, r.range_hi})},
                         {"bearing", json::array({r.bearing_lo, r.bearing_hi})},
                         {"closing_mask", r.closing_mask},
                         {"action", action_to_json(r.action)}});
  }
  return json{{"rules", std::move(rules)},
              {"default_action", action_to_json(s.default_action)}};
}

Strategy strategy_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("strategy", "expected an object");
  reject_unknown_keys(j, {"rules", "default_action"});
  Strategy s;
  const json& rules = require(j, "rules");
  if (!rules.is_array()) throw ConfigError("rules", "expected an array");
  for (const json& jr : rules) {
    reject_unknown_keys(jr, {"kind", "range", "bearing", "closing_mask", "action"});
    Rule r;
    r.kind_match = kind_from_name(get_string(jr, "kind"));
    const json& range = require(jr, "range");
    const json& bearing = require(jr, "bearing");
    if (!range.is_array() || range.size() != 2)
      throw ConfigError("range", "expected [lo, hi]");
    if (!bearing.is_array() || bearing.size() != 2)
      throw ConfigError("bearing", "expected [lo, hi]");
    r.range_lo = range[0].get<int>();
    r.range_hi = range[1].get<int>();
    r.bearing_lo = bearing[0].get<int>();
    r.bearing_hi = bearing[1].get<int>();
    r.closing_mask = static_cast<unsigned>(get_long(jr, "closing_mask"));
    r.action = action_from_json(require(jr, "action"));
    s.rules.push_back(r);
  }
  s.default_action = action_from_json(require(j, "default_action"));
  validate_strategy(s);
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path);
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace alsim::jsonio
