#include "alsim/episode.hpp"

#include <cmath>

namespace alsim {

EpisodeOutcome run_episode(const Strategy& strategy, const EnvironmentParams& env,
                           const EpisodeConfig& cfg, Rng& rng, EpisodeTrace* trace) {
  cfg.validate();
  validate_strategy(strategy);

  WorldState world;
  world.tracker = AgentState{{0.0, 0.0}, 0.0, 0.0};

  const double start_range = 0.5 * env.sensor_range;
  const double bearing = rng.uniform(-kPi, kPi);
  world.target.pos = {start_range * std::cos(bearing), start_range * std::sin(bearing)};
  world.target.heading = rng.uniform(-kPi, kPi);
  world.target.speed = env.target_cruise_speed;
  world.prev_range = distance(world.tracker.pos, world.target.pos);

  if (trace) {
    trace->clear();
    trace->reserve(static_cast<std::size_t>(cfg.ticks) + 1);
  }

  EpisodeOutcome out;
  int in_range_streak = 0;  // consecutive end-of-tick readings within sensor range

  double current_range = world.prev_range;
  for (int t = 0; t < cfg.ticks; ++t) {
    const Observation obs = observe(world, env);
    if (obs.kind == ObsKind::Contact) ++out.contact_ticks;

    const Action act = decide(strategy, obs);
    const AgentState tracker_next =
        step_agent(world.tracker, act, env.tracker_max_turn, env.tracker_max_speed);

    // The target reacts to the tracker's new position.
    WorldState decision_world{tracker_next, world.target, world.prev_range};
    const double decision_range = distance(tracker_next.pos, world.target.pos);
    if (trace) trace->push_back({world.target.pos, decision_range});
    if (decision_range < env.evasion_threshold) ++out.evasion_triggers;

    const Action target_act = target_policy(decision_world, env, rng);
    const AgentState target_next =
        step_agent(world.target, target_act, kPi, env.target_flee_speed);

    world.prev_range = current_range;
    world.tracker = tracker_next;
    world.target = target_next;
    current_range = distance(world.tracker.pos, world.target.pos);
    in_range_streak = current_range <= env.sensor_range ? in_range_streak + 1 : 0;
  }

  if (trace) trace->push_back({world.target.pos, current_range});

  out.final_range = current_range;
  out.success = in_range_streak >= cfg.success_window && out.evasion_triggers == 0;
  return out;
}

}  // namespace alsim
