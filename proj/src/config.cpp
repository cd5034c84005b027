#include "alsim/config.hpp"

#include "alsim/json_io.hpp"

namespace alsim {

using jsonio::json;

const char* mode_name(RunMode m) {
  switch (m) {
    case RunMode::Baseline: return "baseline";
    case RunMode::Anytime: return "anytime";
    case RunMode::CaseBased: return "case_based";
    default: return "punctuated";
  }
}

RunMode mode_from_name(const std::string& s) {
  if (s == "baseline") return RunMode::Baseline;
  if (s == "anytime") return RunMode::Anytime;
  if (s == "case_based") return RunMode::CaseBased;
  if (s == "punctuated") return RunMode::Punctuated;
  throw ConfigError("mode", "expected baseline|anytime|case_based|punctuated");
}

void FleetConfig::validate() const {
  if (n_agents < 1) throw ConfigError("n_agents", "must be >= 1");
  if (observation_period < 1) throw ConfigError("observation_period", "must be >= 1");
  if (!agent_envs.empty() && agent_envs.size() != static_cast<std::size_t>(n_agents))
    throw ConfigError("agent_envs", "must be empty or have n_agents entries");
  for (const EnvironmentParams& e : agent_envs) e.validate();
}

void ExperimentConfig::validate() const {
  if (schedule.empty()) throw ConfigError("schedule", "must be nonempty");
  for (const ScheduleEntry& entry : schedule) {
    if (entry.episodes < 1) throw ConfigError("episodes", "must be >= 1");
    entry.env.validate();
  }
  episode.validate();
  ga.validate();
  trigger.validate();
  if (generations_per_episode < 0)
    throw ConfigError("generations_per_episode", "must be >= 0");
  initial_model.validate();
  if (seeds.empty()) throw ConfigError("seeds", "must be nonempty");
  if (mode == RunMode::Punctuated && !fleet)
    throw ConfigError("fleet", "required for punctuated mode");
  if (fleet) fleet->validate();
  if (case_capacity < 1) throw ConfigError("case_capacity", "must be >= 1");
  if (retrieval_radius < 0.0) throw ConfigError("retrieval_radius", "must be >= 0");
  if (case_k < 1) throw ConfigError("case_k", "must be >= 1");
  if (merge_radius < 0.0) throw ConfigError("merge_radius", "must be >= 0");
}

int ExperimentConfig::total_episodes() const {
  int total = 0;
  for (const ScheduleEntry& e : schedule) total += e.episodes;
  return total;
}

int ExperimentConfig::phase_of(int episode) const {
  int start = 0;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    start += schedule[i].episodes;
    if (episode < start) return static_cast<int>(i);
  }
  return static_cast<int>(schedule.size()) - 1;
}

const EnvironmentParams& ExperimentConfig::env_of(int episode) const {
  return schedule[static_cast<std::size_t>(phase_of(episode))].env;
}

std::vector<int> ExperimentConfig::phase_boundaries() const {
  std::vector<int> out;
  int start = 0;
  for (std::size_t i = 0; i + 1 < schedule.size(); ++i) {
    start += schedule[i].episodes;
    out.push_back(start);
  }
  return out;
}

namespace {

GaParams ga_from_json(const json& j) {
  jsonio::reject_unknown_keys(
      j, {"pop_size", "eval_trials", "elitism", "tournament_k", "crossover_rate",
          "mutation_rate", "rule_count_min", "rule_count_max", "max_turn",
          "max_speed"});
  GaParams p;
  p.pop_size = static_cast<int>(jsonio::get_long(j, "pop_size"));
  p.eval_trials = static_cast<int>(jsonio::get_long(j, "eval_trials"));
  p.elitism = static_cast<int>(jsonio::get_long(j, "elitism"));
  p.tournament_k = static_cast<int>(jsonio::get_long(j, "tournament_k"));
  p.crossover_rate = jsonio::get_double(j, "crossover_rate");
  p.mutation_rate = jsonio::get_double(j, "mutation_rate");
  p.rule_count_min = static_cast<int>(jsonio::get_long(j, "rule_count_min"));
  p.rule_count_max = static_cast<int>(jsonio::get_long(j, "rule_count_max"));
  p.max_turn = jsonio::get_double(j, "max_turn");
  p.max_speed = jsonio::get_double(j, "max_speed");
  return p;
}

json ga_to_json(const GaParams& p) {
  return json{{"pop_size", p.pop_size},
              {"eval_trials", p.eval_trials},
              {"elitism", p.elitism},
              {"tournament_k", p.tournament_k},
              {"crossover_rate", p.crossover_rate},
              {"mutation_rate", p.mutation_rate},
              {"rule_count_min", p.rule_count_min},
              {"rule_count_max", p.rule_count_max},
              {"max_turn", p.max_turn},
              {"max_speed", p.max_speed}};
}

TriggerPolicy trigger_from_json(const json& j) {
  jsonio::reject_unknown_keys(
      j, {"delta_rel", "sustain_episodes", "perf_drop", "perf_window_len"});
  TriggerPolicy t;
  t.delta_rel = jsonio::get_double(j, "delta_rel");
  t.sustain_episodes = static_cast<int>(jsonio::get_long(j, "sustain_episodes"));
  t.perf_drop = jsonio::get_double(j, "perf_drop");
  t.perf_window_len = static_cast<int>(jsonio::get_long(j, "perf_window_len"));
  return t;
}

json trigger_to_json(const TriggerPolicy& t) {
  return json{{"delta_rel", t.delta_rel},
              {"sustain_episodes", t.sustain_episodes},
              {"perf_drop", t.perf_drop},
              {"perf_window_len", t.perf_window_len}};
}

FleetConfig fleet_from_json(const json& j) {
  jsonio::reject_unknown_keys(j, {"n_agents", "observation_period", "agent_envs"});
  FleetConfig f;
  f.n_agents = static_cast<int>(jsonio::get_long(j, "n_agents"));
  f.observation_period = static_cast<int>(jsonio::get_long(j, "observation_period"));
  if (j.contains("agent_envs")) {
    const json& envs = j["agent_envs"];
    if (!envs.is_array()) throw ConfigError("agent_envs", "expected an array");
    for (const json& je : envs) f.agent_envs.push_back(jsonio::env_from_json(je));
  }
  return f;
}

json fleet_to_json(const FleetConfig& f) {
  json j{{"n_agents", f.n_agents}, {"observation_period", f.observation_period}};
  if (!f.agent_envs.empty()) {
    json envs = json::array();
    for (const EnvironmentParams& e : f.agent_envs)
      envs.push_back(jsonio::env_to_json(e));
    j["agent_envs"] = std::move(envs);
  }
  return j;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
  jsonio::reject_unknown_keys(
      j, {"mode", "schedule", "episode", "ga", "trigger", "generations_per_episode",
          "initial_model", "seeds", "fleet", "case_capacity", "retrieval_radius",
          "case_k", "merge_radius"});

  ExperimentConfig cfg;
  cfg.mode = mode_from_name(jsonio::get_string(j, "mode"));

  const json& sched = jsonio::require(j, "schedule");
  if (!sched.is_array()) throw ConfigError("schedule", "expected an array");
  for (const json& je : sched) {
    jsonio::reject_unknown_keys(je, {"episodes", "env"});
    ScheduleEntry entry;
    entry.episodes = static_cast<int>(jsonio::get_long(je, "episodes"));
    entry.env = jsonio::env_from_json(jsonio::require(je, "env"));
    cfg.schedule.push_back(entry);
  }

  const json& ep = jsonio::require(j, "episode");
  jsonio::reject_unknown_keys(ep, {"ticks", "success_window"});
  cfg.episode.ticks = static_cast<int>(jsonio::get_long(ep, "ticks"));
  cfg.episode.success_window = static_cast<int>(jsonio::get_long(ep, "success_window"));

  cfg.ga = ga_from_json(jsonio::require(j, "ga"));
  cfg.trigger = trigger_from_json(jsonio::require(j, "trigger"));
  cfg.generations_per_episode =
      static_cast<int>(jsonio::get_long(j, "generations_per_episode"));
  cfg.initial_model = jsonio::env_from_json(jsonio::require(j, "initial_model"));

  const json& seeds = jsonio::require(j, "seeds");
  if (!seeds.is_array() || seeds.empty())
    throw ConfigError("seeds", "expected a nonempty array");
  for (const json& js : seeds) {
    if (!js.is_number_integer() && !js.is_number_unsigned())
      throw ConfigError("seeds", "expected integers");
    cfg.seeds.push_back(js.get<std::uint64_t>());
  }

  if (j.contains("fleet")) cfg.fleet = fleet_from_json(j["fleet"]);
  if (j.contains("case_capacity"))
    cfg.case_capacity = static_cast<int>(jsonio::get_long(j, "case_capacity"));
  if (j.contains("retrieval_radius"))
    cfg.retrieval_radius = jsonio::get_double(j, "retrieval_radius");
  if (j.contains("case_k"))
    cfg.case_k = static_cast<int>(jsonio::get_long(j, "case_k"));
  if (j.contains("merge_radius"))
    cfg.merge_radius = jsonio::get_double(j, "merge_radius");

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  return parse_config(jsonio::read_file(path));
}

std::string serialize_config(const ExperimentConfig& cfg) {
  json j;
  j["mode"] = mode_name(cfg.mode);
  json sched = json::array();
  for (const ScheduleEntry& e : cfg.schedule)
    sched.push_back(json{{"episodes", e.episodes}, {"env", jsonio::env_to_json(e.env)}});
  j["schedule"] = std::move(sched);
  j["episode"] =
      json{{"ticks", cfg.episode.ticks}, {"success_window", cfg.episode.success_window}};
  j["ga"] = ga_to_json(cfg.ga);
  j["trigger"] = trigger_to_json(cfg.trigger);
  j["generations_per_episode"] = cfg.generations_per_episode;
  j["initial_model"] = jsonio::env_to_json(cfg.initial_model);
  j["seeds"] = cfg.seeds;
  if (cfg.fleet) j["fleet"] = fleet_to_json(*cfg.fleet);
  j["case_capacity"] = cfg.case_capacity;
  j["retrieval_radius"] = cfg.retrieval_radius;
  j["case_k"] = cfg.case_k;
  j["merge_radius"] = cfg.merge_radius;
  return j.dump(2) + "\n";
}

}  // namespace alsim
