#include "alsim/punctuated.hpp"

#include <algorithm>

#include "alsim/episode.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace alsim {

namespace {
constexpr std::uint64_t kRoleGa = 0x6A;
constexpr std::uint64_t kRoleEpisode = 0xE9;
}  // namespace

std::vector<RunLog> run_punctuated(const ExperimentConfig& cfg, const FleetConfig& fleet,
                                   std::uint64_t seed, bool parallel) {
  cfg.validate();
  fleet.validate();

  const int n = fleet.n_agents;
  const int period = fleet.observation_period;

  Rng ga_rng(derive_seed(seed, kRoleGa));
  SimulationModel model{cfg.initial_model, draw_seed_batch(cfg.ga.eval_trials, ga_rng),
                        0};
  Population pop = init_population(cfg.ga, {}, ga_rng);

  const BestView initial = best_strategy(pop);
  Published published{initial.strategy, initial.fitness, model.epoch, 0};

  // Per-agent monitors feed the observer; the observer's own monitor state
  // accumulates the pooled values, one update per observation point.
  std::vector<MonitorState> agent_monitors(
      static_cast<std::size_t>(n),
      MonitorState(static_cast<std::size_t>(cfg.episode.ticks),
                   static_cast<std::size_t>(cfg.trigger.perf_window_len),
                   model.env_estimate.evasion_threshold));
  MonitorState observer(1, static_cast<std::size_t>(cfg.trigger.perf_window_len),
                        model.env_estimate.evasion_threshold);

  const int total = cfg.total_episodes();
  std::vector<RunLog> logs(static_cast<std::size_t>(n));
  for (auto& log : logs) log.records.reserve(static_cast<std::size_t>(total));

  // Successes of the episodes since the last observation, per agent.
  std::vector<std::vector<double>> recent(static_cast<std::size_t>(n));

  for (int e = 0; e < total; ++e) {
    const int phase = cfg.phase_of(e);

    std::vector<EpisodeOutcome> outcomes(static_cast<std::size_t>(n));
    std::vector<EpisodeTrace> traces(static_cast<std::size_t>(n));
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (int a = 0; a < n; ++a) {
      const EnvironmentParams& env = fleet.agent_envs.empty()
                                         ? cfg.env_of(e)
                                         : fleet.agent_envs[static_cast<std::size_t>(a)];
      Rng ep_rng(derive_seed(seed, kRoleEpisode, static_cast<std::uint64_t>(e),
                             static_cast<std::uint64_t>(a)));
      outcomes[static_cast<std::size_t>(a)] =
          run_episode(published.strategy, env, cfg.episode, ep_rng,
                      &traces[static_cast<std::size_t>(a)]);
    }

    for (int a = 0; a < n; ++a) {
      const auto ia = static_cast<std::size_t>(a);
      agent_monitors[ia] = monitor_update(agent_monitors[ia], traces[ia], outcomes[ia]);
      recent[ia].push_back(outcomes[ia].success ? 1.0 : 0.0);
    }

    bool trigger_fired = false;
    const bool observation_point = (e + 1) % period == 0;
    if (observation_point) {
      // Pool the agents' current estimates (unweighted mean) and their mean
      // success since the last observation.
      double est_sum = 0.0;
      int est_n = 0;
      for (const MonitorState& m : agent_monitors)
        if (auto est = m.speed_estimate()) {
          est_sum += *est;
          ++est_n;
        }
      std::optional<double> pooled_estimate;
      if (est_n > 0) pooled_estimate = est_sum / est_n;

      double perf_sum = 0.0;
      for (const auto& r : recent) {
        double s = 0.0;
        for (double v : r) s += v;
        perf_sum += r.empty() ? 0.0 : s / static_cast<double>(r.size());
      }
      const double pooled_perf = perf_sum / n;
      for (auto& r : recent) r.clear();

      observer = monitor_observe_aggregate(observer, pooled_estimate, pooled_perf);
      if (auto msg = trigger_check(observer, model, cfg.trigger)) {
        trigger_fired = true;
        AdjustResult adj = apply_adjustment(pop, model, *msg, AdjustmentMode::Restart,
                                            nullptr, cfg.ga, ga_rng);
        pop = std::move(adj.population);
        model = std::move(adj.model);
        observer.on_model_adjusted(model.env_estimate.evasion_threshold);
        for (MonitorState& m : agent_monitors)
          m.on_model_adjusted(model.env_estimate.evasion_threshold);
      }

      // The accumulated budget for the unobserved span, then broadcast.
      for (int g = 0; g < cfg.generations_per_episode * period; ++g)
        pop = evolve_generation(pop, cfg.ga, model, cfg.episode, ga_rng, parallel);
      evaluate_population(pop, model, cfg.episode, parallel);
      const BestView best = best_strategy(pop);
      published =
          publish_best(published, NewBestMsg{best.strategy, best.fitness, model.epoch});
    }

    for (int a = 0; a < n; ++a) {
      const auto ia = static_cast<std::size_t>(a);
      EpisodeRecord rec;
      rec.episode = e;
      rec.phase = phase;
      rec.success = outcomes[ia].success;
      rec.published_fitness = published.fitness;
      rec.model_epoch = model.epoch;
      rec.trigger_fired = trigger_fired;
      rec.monitor_estimate = agent_monitors[ia].speed_estimate();
      rec.strategy_version = published.version;
      logs[ia].records.push_back(std::move(rec));
    }
  }
  return logs;
}

}  // namespace alsim
