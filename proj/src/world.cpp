#include "alsim/world.hpp"

#include <algorithm>
#include <cmath>

namespace alsim {

namespace {

bool all_finite(const AgentState& a) {
  return std::isfinite(a.pos.x) && std::isfinite(a.pos.y) &&
         std::isfinite(a.heading) && std::isfinite(a.speed);
}

}  // namespace

void EnvironmentParams::validate() const {
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(target_cruise_speed) || target_cruise_speed < 0.0)
    throw ConfigError("target_cruise_speed", "must be finite and >= 0");
  if (!finite(target_flee_speed) || target_flee_speed <= target_cruise_speed)
    throw ConfigError("target_flee_speed", "must exceed target_cruise_speed");
  if (!finite(evasion_threshold) || evasion_threshold <= 0.0)
    throw ConfigError("evasion_threshold", "must be finite and > 0");
  if (!finite(sensor_range) || sensor_range <= evasion_threshold)
    throw ConfigError("sensor_range", "must exceed evasion_threshold");
  if (!finite(tracker_max_speed) || tracker_max_speed <= 0.0)
    throw ConfigError("tracker_max_speed", "must be finite and > 0");
  if (!finite(tracker_max_turn) || tracker_max_turn <= 0.0 || tracker_max_turn > kPi)
    throw ConfigError("tracker_max_turn", "must be in (0, pi]");
  if (!finite(target_heading_jitter) || target_heading_jitter < 0.0)
    throw ConfigError("target_heading_jitter", "must be finite and >= 0");
}

void EpisodeConfig::validate() const {
  if (ticks < 1) throw ConfigError("ticks", "must be >= 1");
  if (success_window < 1 || success_window > ticks)
    throw ConfigError("success_window", "must be in [1, ticks]");
}

AgentState step_agent(const AgentState& a, const Action& act, double max_turn,
                      double max_speed) {
  if (!all_finite(a) || !std::isfinite(act.turn) || !std::isfinite(act.speed) ||
      !std::isfinite(max_turn) || !std::isfinite(max_speed))
    throw InvalidStateError("step_agent: non-finite input");

  double turn = std::clamp(act.turn, -max_turn, max_turn);
  double speed = std::clamp(act.speed, 0.0, max_speed);

  AgentState out;
  out.heading = wrap_angle(a.heading + turn);
  out.speed = speed;
  out.pos.x = a.pos.x + speed * std::cos(out.heading);
  out.pos.y = a.pos.y + speed * std::sin(out.heading);
  return out;
}

Action target_policy(const WorldState& world, const EnvironmentParams& env, Rng& rng) {
  const double range = distance(world.tracker.pos, world.target.pos);
  double desired_heading;
  double speed;
  if (range < env.evasion_threshold) {
    // Bolt along the tracker->target ray.
    desired_heading = std::atan2(world.target.pos.y - world.tracker.pos.y,
                                 world.target.pos.x - world.tracker.pos.x);
    speed = env.target_flee_speed;
  } else {
    desired_heading = world.target.heading;
    if (env.target_heading_jitter > 0.0)
      desired_heading += rng.gaussian(0.0, env.target_heading_jitter);
    speed = env.target_cruise_speed;
  }
  return Action{wrap_angle(desired_heading - world.target.heading), speed};
}

Observation observe(const WorldState& world, const EnvironmentParams& env) {
  const double range = distance(world.tracker.pos, world.target.pos);
  Observation obs;
  if (range > env.sensor_range) {
    obs.kind = ObsKind::Lost;
    return obs;
  }
  obs.kind = ObsKind::Contact;

  int rb = static_cast<int>(std::floor(range / env.sensor_range * kRangeBuckets));
  obs.range_bucket = std::clamp(rb, 0, kRangeBuckets - 1);

  const double abs_bearing = std::atan2(world.target.pos.y - world.tracker.pos.y,
                                        world.target.pos.x - world.tracker.pos.x);
  const double bearing = wrap_angle(abs_bearing - world.tracker.heading);
  int bb = static_cast<int>(std::floor((bearing + kPi) / kTwoPi * kBearingBuckets));
  obs.bearing_bucket = std::clamp(bb, 0, kBearingBuckets - 1);

  const double delta = range - world.prev_range;
  if (std::abs(delta) < kClosingEpsilon)
    obs.closing = Closing::Steady;
  else
    obs.closing = delta < 0.0 ? Closing::Closing : Closing::Opening;
  return obs;
}

}  // namespace alsim
