#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "alsim/case_base.hpp"
#include "alsim/config.hpp"
#include "alsim/ga.hpp"
#include "alsim/monitor.hpp"

namespace alsim {

enum class AdjustmentMode { Restart, Reseed };

// Learning -> execution: a better strategy was found.
struct NewBestMsg {
  Strategy strategy;
  double fitness = 0.0;
  long model_epoch = 0;
};

// The strategy the executor currently runs. `version` counts replacements,
// which lets tests pin down exactly when the executor switched.
struct Published {
  Strategy strategy;
  double fitness = 0.0;
  long model_epoch = 0;
  long version = 0;
};

// A candidate replaces the published strategy when its model epoch is newer,
// or on a strictly better fitness within the same epoch. A post-adjustment
// strategy supersedes a pre-adjustment one even at lower fitness: the old
// fitness refers to a dead model.
Published publish_best(const Published& current, const NewBestMsg& candidate);

struct EpisodeRecord {
  long episode = 0;
  int phase = 0;
  bool success = false;
  double published_fitness = 0.0;
  long model_epoch = 0;
  bool trigger_fired = false;
  std::optional<double> monitor_estimate;
  std::optional<bool> case_hit;            // set on case-based adjustments
  std::optional<std::size_t> case_base_size;  // case-based mode only
  long strategy_version = 0;
};

struct RunLog {
  std::vector<EpisodeRecord> records;
};

struct AdjustResult {
  Population population;
  SimulationModel model;
  std::optional<bool> case_hit;
};

// Adopts the new environment estimate: the eval batch is re-drawn, the
// model epoch advances, and the population is rebuilt. Restart starts from
// scratch; Reseed retrieves seeds from the case base and falls back to
// Restart on a miss. Reseed without a case base is a ConfigError.
AdjustResult apply_adjustment(const Population& pop, const SimulationModel& model,
                              const EnvChangedMsg& msg, AdjustmentMode mode,
                              CaseBase* case_base, const GaParams& params, Rng& rng);

// Builds the case-metric weights from the schedule's per-parameter dynamic
// range so dimensions are comparably scaled.
CaseWeights schedule_weights(const ExperimentConfig& cfg);
CaseBase make_case_base(const ExperimentConfig& cfg);

// The anytime-learning loop: per episode the executor runs the published
// strategy in the true environment, the monitor folds in the trace, a
// trigger may adjust the model, the learner runs its generation budget, and
// the best strategy is (re)published.
RunLog run_anytime(const ExperimentConfig& cfg, std::uint64_t seed,
                   bool parallel = false);

// Same loop with the monitor and triggers disabled and the model pinned to
// the initial estimate: the control condition.
RunLog run_baseline(const ExperimentConfig& cfg, std::uint64_t seed,
                    bool parallel = false);

// Anytime loop that checkpoints the outgoing model's best strategies into
// the case base on every trigger and reseeds from the nearest stored case.
RunLog run_case_based(const ExperimentConfig& cfg, std::uint64_t seed,
                      CaseBase& case_base, bool parallel = false);

}  // namespace alsim
