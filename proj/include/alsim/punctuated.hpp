#pragma once

#include <cstdint>
#include <vector>

#include "alsim/anytime.hpp"
#include "alsim/config.hpp"

namespace alsim {

// Punctuated anytime learning: one central learner serves a fleet of
// agents. Every observation_period episodes the observer pools the agents'
// monitor estimates and recent performance, checks the trigger against the
// central model, runs the accumulated learning budget, and broadcasts the
// best strategy. Between observations every agent keeps its last broadcast
// strategy. Returns one log per agent.
std::vector<RunLog> run_punctuated(const ExperimentConfig& cfg, const FleetConfig& fleet,
                                   std::uint64_t seed, bool parallel = false);

}  // namespace alsim
