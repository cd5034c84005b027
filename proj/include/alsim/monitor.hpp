#pragma once

#include <cstddef>
#include <deque>
#include <optional>

#include "alsim/ga.hpp"
#include "alsim/world.hpp"

namespace alsim {

// When to adjust the simulation model. ParameterDelta watches the measured
// cruise speed against the model; PerformanceDrop watches the success rate
// against the best level seen this phase.
struct TriggerPolicy {
  double delta_rel = 0.2;
  int sustain_episodes = 3;
  double perf_drop = 0.5;
  int perf_window_len = 20;

  void validate() const;
};

enum class TriggerCause { ParameterDelta, PerformanceDrop };

struct EnvChangedMsg {
  EnvironmentParams new_estimate;
  TriggerCause cause = TriggerCause::ParameterDelta;
};

// Execution-side observer state. Displacement samples are tagged flee when
// the tracker-target range at the target's decision point was below the
// modeled evasion threshold; only cruise samples feed the speed estimate.
class MonitorState {
 public:
  MonitorState(std::size_t displacement_window_len, std::size_t perf_window_len,
               double flee_threshold);

  std::optional<double> speed_estimate() const { return speed_estimate_; }
  long episodes_since_change() const { return episodes_since_change_; }
  std::size_t perf_window_len() const { return perf_capacity_; }
  bool perf_window_full() const { return perf_window_.size() >= perf_capacity_; }
  double perf_window_mean() const;
  double best_perf_mean() const { return best_perf_mean_; }
  const std::deque<std::optional<double>>& estimate_history() const {
    return estimate_history_;
  }

  // Called after the learning side adopted a new model.
  void on_model_adjusted(double new_flee_threshold);

  friend MonitorState monitor_update(const MonitorState& m, const EpisodeTrace& trace,
                                     const EpisodeOutcome& outcome);
  friend MonitorState monitor_observe_aggregate(const MonitorState& m,
                                                std::optional<double> estimate,
                                                double perf_value);

 private:
  void finish_update(double perf_value);

  struct DispSample {
    double displacement;
    bool flee;
  };

  std::deque<DispSample> displacements_;
  std::size_t displacement_capacity_;
  std::deque<double> perf_window_;
  std::size_t perf_capacity_;
  std::deque<std::optional<double>> estimate_history_;
  std::optional<double> speed_estimate_;
  double flee_threshold_;
  double best_perf_mean_ = 0.0;
  long episodes_since_change_ = 0;
};

// Folds one episode's target track into the monitor. Traces shorter than
// two samples leave the estimate untouched. Returns the updated state.
MonitorState monitor_update(const MonitorState& m, const EpisodeTrace& trace,
                            const EpisodeOutcome& outcome);

// Update path for the punctuated observer, which injects an externally
// aggregated estimate and performance value instead of a raw trace.
MonitorState monitor_observe_aggregate(const MonitorState& m,
                                       std::optional<double> estimate,
                                       double perf_value);

// At most one message per call; a measured parameter delta outranks the
// indirect performance symptom.
std::optional<EnvChangedMsg> trigger_check(const MonitorState& m,
                                           const SimulationModel& model,
                                           const TriggerPolicy& pol);

}  // namespace alsim
