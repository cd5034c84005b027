#include <doctest.h>

#include "alsim/punctuated.hpp"
#include "helpers.hpp"

using namespace alsim;

TEST_CASE("strategy changes only land on observation boundaries") {
  ExperimentConfig cfg = testutil::small_config();
  cfg.mode = RunMode::Punctuated;
  FleetConfig fleet;
  fleet.n_agents = 3;
  fleet.observation_period = 5;
  cfg.fleet = fleet;

  const std::vector<RunLog> logs = run_punctuated(cfg, fleet, 17);
  REQUIRE(logs.size() == 3);
  for (const RunLog& log : logs) {
    REQUIRE(log.records.size() == static_cast<std::size_t>(cfg.total_episodes()));
    for (std::size_t e = 1; e < log.records.size(); ++e) {
      if (log.records[e].strategy_version != log.records[e - 1].strategy_version) {
        // The version advanced during episode e's observation step, so the
        // newly broadcast strategy is first USED at episode e+1, a multiple
        // of the period.
        REQUIRE((e + 1) % 5 == 0);
      }
    }
  }
}

TEST_CASE("agents share the identical broadcast schedule") {
  ExperimentConfig cfg = testutil::small_config();
  cfg.mode = RunMode::Punctuated;
  FleetConfig fleet;
  fleet.n_agents = 2;
  fleet.observation_period = 3;
  cfg.fleet = fleet;

  const std::vector<RunLog> logs = run_punctuated(cfg, fleet, 4);
  for (std::size_t e = 0; e < logs[0].records.size(); ++e) {
    REQUIRE(logs[0].records[e].strategy_version == logs[1].records[e].strategy_version);
    REQUIRE(logs[0].records[e].published_fitness ==
            logs[1].records[e].published_fitness);
    REQUIRE(logs[0].records[e].model_epoch == logs[1].records[e].model_epoch);
  }
}

TEST_CASE("staleness never reaches the observation period") {
  ExperimentConfig cfg = testutil::small_config();
  cfg.mode = RunMode::Punctuated;
  FleetConfig fleet;
  fleet.n_agents = 2;
  fleet.observation_period = 4;
  cfg.fleet = fleet;

  // The central best can only advance at an observation point, and the next
  // broadcast is immediate, so within each period the agents' strategy
  // version must be frozen: no agent ever lags the central best by a full
  // period.
  const std::vector<RunLog> logs = run_punctuated(cfg, fleet, 29);
  for (const RunLog& log : logs) {
    for (std::size_t e = 1; e < log.records.size(); ++e) {
      if ((e + 1) % 4 != 0)
        REQUIRE(log.records[e].strategy_version ==
                log.records[e - 1].strategy_version);
    }
  }
}

TEST_CASE("a single agent with period one reduces to the plain anytime loop") {
  ExperimentConfig cfg = testutil::small_config();
  EnvironmentParams fast = cfg.schedule[0].env;
  fast.target_cruise_speed = 1.6;
  cfg.schedule = {{12, cfg.schedule[0].env}, {12, fast}};

  FleetConfig fleet;
  fleet.n_agents = 1;
  fleet.observation_period = 1;

  const RunLog reference = run_anytime(cfg, 23);
  const std::vector<RunLog> logs = run_punctuated(cfg, fleet, 23);
  REQUIRE(logs.size() == 1);
  REQUIRE(logs[0].records.size() == reference.records.size());
  for (std::size_t e = 0; e < reference.records.size(); ++e) {
    const EpisodeRecord& a = reference.records[e];
    const EpisodeRecord& b = logs[0].records[e];
    REQUIRE(a.success == b.success);
    REQUIRE(a.published_fitness == b.published_fitness);
    REQUIRE(a.model_epoch == b.model_epoch);
    REQUIRE(a.trigger_fired == b.trigger_fired);
    REQUIRE(a.monitor_estimate == b.monitor_estimate);
  }
}

TEST_CASE("per-agent environment overrides are honored") {
  ExperimentConfig cfg = testutil::small_config();
  cfg.mode = RunMode::Punctuated;
  cfg.schedule[0].episodes = 10;

  EnvironmentParams slow = cfg.schedule[0].env;
  EnvironmentParams fast = slow;
  fast.target_cruise_speed = 1.8;

  FleetConfig fleet;
  fleet.n_agents = 2;
  fleet.observation_period = 2;
  fleet.agent_envs = {slow, fast};
  cfg.fleet = fleet;

  const std::vector<RunLog> logs = run_punctuated(cfg, fleet, 11);
  REQUIRE(logs.size() == 2);
  // Monitors see different worlds: the estimates must differ by the end.
  const auto& last0 = logs[0].records.back().monitor_estimate;
  const auto& last1 = logs[1].records.back().monitor_estimate;
  REQUIRE(last0.has_value());
  REQUIRE(last1.has_value());
  CHECK(*last0 == doctest::Approx(0.8).epsilon(1e-6));
  CHECK(*last1 == doctest::Approx(1.8).epsilon(1e-6));
}

TEST_CASE("fleet validation") {
  FleetConfig fleet;
  fleet.n_agents = 0;
  CHECK_THROWS_AS(fleet.validate(), ConfigError);
  fleet.n_agents = 2;
  fleet.observation_period = 0;
  CHECK_THROWS_AS(fleet.validate(), ConfigError);
  fleet.observation_period = 1;
  fleet.agent_envs.push_back(testutil::quiet_env());
  CHECK_THROWS_AS(fleet.validate(), ConfigError);  // must match n_agents
}
