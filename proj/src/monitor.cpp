#include "alsim/monitor.hpp"

#include <algorithm>
#include <cmath>

namespace alsim {

namespace {
// Estimates older than this many updates never influence a trigger.
constexpr std::size_t kEstimateHistoryCap = 256;
}  // namespace

void TriggerPolicy::validate() const {
  if (!(delta_rel > 0.0)) throw ConfigError("delta_rel", "must be > 0");
  if (sustain_episodes < 1 ||
      static_cast<std::size_t>(sustain_episodes) > kEstimateHistoryCap)
    throw ConfigError("sustain_episodes", "must be in [1, 256]");
  if (!(perf_drop > 0.0) || perf_drop > 1.0)
    throw ConfigError("perf_drop", "must be in (0, 1]");
  if (perf_window_len < 1) throw ConfigError("perf_window_len", "must be >= 1");
}

MonitorState::MonitorState(std::size_t displacement_window_len,
                           std::size_t perf_window_len, double flee_threshold)
    : displacement_capacity_(std::max<std::size_t>(displacement_window_len, 1)),
      perf_capacity_(std::max<std::size_t>(perf_window_len, 1)),
      flee_threshold_(flee_threshold) {}

double MonitorState::perf_window_mean() const {
  if (perf_window_.empty()) return 0.0;
  double sum = 0.0;
  for (double v : perf_window_) sum += v;
  return sum / static_cast<double>(perf_window_.size());
}

void MonitorState::on_model_adjusted(double new_flee_threshold) {
  flee_threshold_ = new_flee_threshold;
  estimate_history_.clear();
  best_perf_mean_ = 0.0;
  episodes_since_change_ = 0;
}

void MonitorState::finish_update(double perf_value) {
  ++episodes_since_change_;

  perf_window_.push_back(perf_value);
  while (perf_window_.size() > perf_capacity_) perf_window_.pop_front();
  // Track the phase-best level only once the window is wholly inside the
  // phase; mixed windows would import the previous phase's level.
  if (perf_window_full() &&
      episodes_since_change_ >= static_cast<long>(perf_capacity_))
    best_perf_mean_ = std::max(best_perf_mean_, perf_window_mean());

  estimate_history_.push_back(speed_estimate_);
  while (estimate_history_.size() > kEstimateHistoryCap) estimate_history_.pop_front();
}

MonitorState monitor_update(const MonitorState& m, const EpisodeTrace& trace,
                            const EpisodeOutcome& outcome) {
  MonitorState out = m;
  if (trace.size() >= 2) {
    for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
      MonitorState::DispSample s{distance(trace[i + 1].target_pos, trace[i].target_pos),
                                 trace[i].range < m.flee_threshold_};
      out.displacements_.push_back(s);
      while (out.displacements_.size() > out.displacement_capacity_)
        out.displacements_.pop_front();
    }
    std::optional<double> est;
    for (const auto& s : out.displacements_)
      if (!s.flee && (!est || s.displacement > *est)) est = s.displacement;
    out.speed_estimate_ = est;
  }
  out.finish_update(outcome.success ? 1.0 : 0.0);
  return out;
}

MonitorState monitor_observe_aggregate(const MonitorState& m,
                                       std::optional<double> estimate,
                                       double perf_value) {
  MonitorState out = m;
  out.speed_estimate_ = estimate;
  out.finish_update(perf_value);
  return out;
}

namespace {

// The monitor measures only the cruise speed; carry the model's remaining
// parameters over and keep the flee/cruise ratio if the estimate would
// otherwise break the flee > cruise invariant.
EnvironmentParams make_new_estimate(const EnvironmentParams& model_env,
                                    std::optional<double> estimate) {
  EnvironmentParams next = model_env;
  if (estimate) {
    next.target_cruise_speed = *estimate;
    if (next.target_flee_speed <= next.target_cruise_speed &&
        model_env.target_cruise_speed > 0.0)
      next.target_flee_speed = *estimate * (model_env.target_flee_speed /
                                            model_env.target_cruise_speed);
  }
  return next;
}

}  // namespace

std::optional<EnvChangedMsg> trigger_check(const MonitorState& m,
                                           const SimulationModel& model,
                                           const TriggerPolicy& pol) {
  const double model_speed = model.env_estimate.target_cruise_speed;

  if (model_speed > 0.0) {
    int consecutive = 0;
    const auto& hist = m.estimate_history();
    for (auto it = hist.rbegin(); it != hist.rend(); ++it) {
      if (!*it) break;
      if (std::abs(**it - model_speed) / model_speed <= pol.delta_rel) break;
      ++consecutive;
    }
    if (consecutive >= pol.sustain_episodes)
      return EnvChangedMsg{make_new_estimate(model.env_estimate, m.speed_estimate()),
                           TriggerCause::ParameterDelta};
  }

  if (m.perf_window_full() &&
      m.episodes_since_change() >= static_cast<long>(m.perf_window_len()) &&
      m.best_perf_mean() - m.perf_window_mean() > pol.perf_drop)
    return EnvChangedMsg{make_new_estimate(model.env_estimate, m.speed_estimate()),
                         TriggerCause::PerformanceDrop};

  return std::nullopt;
}

}  // namespace alsim
