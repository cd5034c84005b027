#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "alsim/ga.hpp"
#include "alsim/monitor.hpp"
#include "alsim/world.hpp"

namespace alsim {

enum class RunMode { Baseline, Anytime, CaseBased, Punctuated };

const char* mode_name(RunMode m);
RunMode mode_from_name(const std::string& s);  // throws ConfigError

struct ScheduleEntry {
  int episodes = 1;
  EnvironmentParams env;
};

// Fleet of cheap agents served by one central learner. When agent_envs is
// empty every agent follows the experiment schedule; otherwise agent i
// lives in agent_envs[i] for the whole run.
struct FleetConfig {
  int n_agents = 1;
  int observation_period = 1;
  std::vector<EnvironmentParams> agent_envs;

  void validate() const;
};

struct ExperimentConfig {
  RunMode mode = RunMode::Anytime;
  std::vector<ScheduleEntry> schedule;
  EpisodeConfig episode;
  GaParams ga;
  TriggerPolicy trigger;
  int generations_per_episode = 2;
  EnvironmentParams initial_model;
  std::vector<std::uint64_t> seeds;
  std::optional<FleetConfig> fleet;
  int case_capacity = 16;
  double retrieval_radius = 0.25;
  int case_k = 5;
  double merge_radius = 0.05;

  void validate() const;
  int total_episodes() const;
  int phase_of(int episode) const;
  const EnvironmentParams& env_of(int episode) const;
  // First episode index of each phase after the first; the plot's change markers.
  std::vector<int> phase_boundaries() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& cfg);

}  // namespace alsim
