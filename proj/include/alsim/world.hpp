#pragma once

#include <vector>

#include "alsim/errors.hpp"
#include "alsim/geometry.hpp"
#include "alsim/rng.hpp"

namespace alsim {

// Sensor discretization. Small enough that a desk-scale GA can cover the
// observation space with a handful of rules.
inline constexpr int kRangeBuckets = 8;
inline constexpr int kBearingBuckets = 8;
inline constexpr double kClosingEpsilon = 1e-6;  // m; |delta range| below counts as steady

struct AgentState {
  Vec2 pos{0.0, 0.0};
  double heading = 0.0;  // radians in [-pi, pi)
  double speed = 0.0;    // m/tick
};

// The true (or modeled) environment. The target's cruise speed is the
// parameter the monitor watches.
struct EnvironmentParams {
  double target_cruise_speed = 0.8;   // m/tick
  double target_flee_speed = 2.4;     // m/tick, > cruise
  double evasion_threshold = 2.0;     // m; closing below it makes the target bolt
  double sensor_range = 30.0;         // m
  double tracker_max_speed = 2.0;     // m/tick
  double tracker_max_turn = 0.7;      // radians/tick
  double target_heading_jitter = 0.12;  // std-dev of per-tick cruise heading change

  void validate() const;  // throws ConfigError naming the offending field
};

struct Action {
  double turn = 0.0;   // radians/tick
  double speed = 0.0;  // m/tick
};

enum class ObsKind { Contact, Lost };
enum class Closing { Opening = 0, Steady = 1, Closing = 2 };

struct Observation {
  ObsKind kind = ObsKind::Lost;
  int range_bucket = 0;    // valid only when kind == Contact
  int bearing_bucket = 0;  // valid only when kind == Contact
  Closing closing = Closing::Steady;
};

struct WorldState {
  AgentState tracker;
  AgentState target;
  double prev_range = 0.0;  // tracker-target range when the previous tick began
};

struct EpisodeConfig {
  int ticks = 60;
  int success_window = 6;  // final ticks that must all stay within sensor range

  void validate() const;
};

struct EpisodeOutcome {
  bool success = false;
  int contact_ticks = 0;
  int evasion_triggers = 0;
  double final_range = 0.0;
};

inline bool operator==(const EpisodeOutcome& a, const EpisodeOutcome& b) {
  return a.success == b.success && a.contact_ticks == b.contact_ticks &&
         a.evasion_triggers == b.evasion_triggers && a.final_range == b.final_range;
}

// Decision-time sample of the target track: the target's position when it
// picks its action and the tracker-target range at that moment. One sample
// per tick plus a final post-move entry, so a T-tick episode yields T+1
// samples and T displacement readings.
struct TraceSample {
  Vec2 target_pos;
  double range = 0.0;
};
using EpisodeTrace = std::vector<TraceSample>;

// Applies a clamped action: turn limited to +/-max_turn, speed to
// [0, max_speed]; the agent then moves speed units along its new heading.
// Pure. Throws InvalidStateError on non-finite input.
AgentState step_agent(const AgentState& a, const Action& act, double max_turn,
                      double max_speed);

// The mouse: bolt straight away at flee speed when the tracker is closer
// than the evasion threshold (strict), otherwise wander at cruise speed
// with Gaussian heading jitter.
Action target_policy(const WorldState& world, const EnvironmentParams& env, Rng& rng);

// Discretized sensor reading for the tracker.
Observation observe(const WorldState& world, const EnvironmentParams& env);

}  // namespace alsim
