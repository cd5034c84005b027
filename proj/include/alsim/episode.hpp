#pragma once

#include "alsim/strategy.hpp"
#include "alsim/world.hpp"

namespace alsim {

// Runs one cat-and-mouse episode: the tracker follows `strategy`, the
// target follows target_policy in `env`. Placement: tracker at the origin
// heading 0; target at half sensor range, uniform random bearing and
// heading. Success means the target stayed within sensor range for the
// final cfg.success_window ticks and the evasion response never fired.
// Deterministic given the rng seed. If `trace` is non-null it receives the
// decision-time target track (ticks+1 samples).
EpisodeOutcome run_episode(const Strategy& strategy, const EnvironmentParams& env,
                           const EpisodeConfig& cfg, Rng& rng,
                           EpisodeTrace* trace = nullptr);

}  // namespace alsim
