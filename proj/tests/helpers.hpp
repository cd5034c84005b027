#pragma once

#include <algorithm>

#include "alsim/config.hpp"
#include "alsim/strategy.hpp"
#include "alsim/world.hpp"

namespace testutil {

inline alsim::EnvironmentParams quiet_env() {
  alsim::EnvironmentParams env;
  env.target_cruise_speed = 0.4;
  env.target_flee_speed = 2.4;
  env.evasion_threshold = 0.5;
  env.sensor_range = 30.0;
  env.tracker_max_speed = 2.0;
  env.tracker_max_turn = 0.7;
  env.target_heading_jitter = 0.0;
  return env;
}

// Bang-bang pursuit: aim at the target's bearing bucket, full speed at
// distance, match-ish speed when close.
inline alsim::Strategy pursuit_strategy(double max_turn, double fast, double slow) {
  using namespace alsim;
  Strategy s;
  const auto center = [](int b) {
    return (static_cast<double>(b) + 0.5) * (kTwoPi / kBearingBuckets) - kPi;
  };
  for (int b = 0; b < kBearingBuckets; ++b) {
    Rule r;
    r.kind_match = KindMatch::Contact;
    r.range_lo = 1;
    r.range_hi = kRangeBuckets - 1;
    r.bearing_lo = b;
    r.bearing_hi = b;
    r.action = {std::clamp(center(b), -max_turn, max_turn), fast};
    s.rules.push_back(r);
  }
  for (int b = 0; b < kBearingBuckets; ++b) {
    Rule r;
    r.kind_match = KindMatch::Contact;
    r.range_lo = 0;
    r.range_hi = 0;
    r.bearing_lo = b;
    r.bearing_hi = b;
    r.action = {std::clamp(center(b), -max_turn, max_turn), slow};
    s.rules.push_back(r);
  }
  s.default_action = {0.0, fast};
  return s;
}

inline alsim::Strategy idle_strategy() {
  alsim::Strategy s;
  s.rules.push_back(alsim::Rule{});  // matches anything, acts {0, 0}
  s.rules.back().action = {0.0, 0.0};
  s.default_action = {0.0, 0.0};
  return s;
}

// Desk-scale config for loop tests: small population, short episodes.
inline alsim::ExperimentConfig small_config() {
  alsim::ExperimentConfig cfg;
  cfg.mode = alsim::RunMode::Anytime;

  alsim::EnvironmentParams env;
  env.target_cruise_speed = 0.8;
  env.target_flee_speed = 2.4;
  env.evasion_threshold = 2.0;
  env.sensor_range = 30.0;
  env.tracker_max_speed = 2.0;
  env.tracker_max_turn = 0.7;
  env.target_heading_jitter = 0.12;

  cfg.schedule = {{30, env}};
  cfg.episode = {40, 4};
  cfg.ga.pop_size = 12;
  cfg.ga.eval_trials = 6;
  cfg.ga.elitism = 2;
  cfg.ga.tournament_k = 3;
  cfg.ga.crossover_rate = 0.8;
  cfg.ga.mutation_rate = 0.15;
  cfg.ga.rule_count_min = 2;
  cfg.ga.rule_count_max = 6;
  cfg.ga.max_turn = env.tracker_max_turn;
  cfg.ga.max_speed = env.tracker_max_speed;
  cfg.trigger.delta_rel = 0.2;
  cfg.trigger.sustain_episodes = 3;
  cfg.trigger.perf_drop = 0.5;
  cfg.trigger.perf_window_len = 10;
  cfg.generations_per_episode = 1;
  cfg.initial_model = env;
  cfg.seeds = {11};
  return cfg;
}

}  // namespace testutil
