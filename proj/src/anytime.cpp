#include "alsim/anytime.hpp"

#include <algorithm>
#include <numeric>

#include "alsim/episode.hpp"

namespace alsim {

namespace {
// Stream roles under the per-run master seed (D-style split per run,
// episode, role).
constexpr std::uint64_t kRoleGa = 0x6A;
constexpr std::uint64_t kRoleEpisode = 0xE9;
}  // namespace

Published publish_best(const Published& current, const NewBestMsg& candidate) {
  const bool newer_epoch = candidate.model_epoch > current.model_epoch;
  const bool better_here =
      candidate.model_epoch == current.model_epoch && candidate.fitness > current.fitness;
  if (!newer_epoch && !better_here) return current;
  return Published{candidate.strategy, candidate.fitness, candidate.model_epoch,
                   current.version + 1};
}

AdjustResult apply_adjustment(const Population& pop, const SimulationModel& model,
                              const EnvChangedMsg& msg, AdjustmentMode mode,
                              CaseBase* case_base, const GaParams& params, Rng& rng) {
  (void)pop;
  msg.new_estimate.validate();

  AdjustResult out;
  out.model.env_estimate = msg.new_estimate;
  out.model.eval_seed_batch = draw_seed_batch(params.eval_trials, rng);
  out.model.epoch = model.epoch + 1;

  std::vector<Strategy> seeds;
  if (mode == AdjustmentMode::Reseed) {
    if (!case_base)
      throw ConfigError("case_base", "Reseed adjustment requires a case base");
    if (auto hit = nn_retrieve(*case_base, msg.new_estimate)) {
      for (const StoredStrategy& s : hit->seed_strategies) seeds.push_back(s.strategy);
      out.case_hit = true;
    } else {
      out.case_hit = false;
    }
  }
  out.population = init_population(params, seeds, rng);
  return out;
}

CaseWeights schedule_weights(const ExperimentConfig& cfg) {
  const auto span = [&](auto field) {
    double lo = field(cfg.schedule.front().env);
    double hi = lo;
    for (const ScheduleEntry& e : cfg.schedule) {
      lo = std::min(lo, field(e.env));
      hi = std::max(hi, field(e.env));
    }
    const double range = hi - lo;
    return range > 0.0 ? range : std::max(std::abs(hi), 1.0);
  };
  CaseWeights w;
  w.cruise = span([](const EnvironmentParams& e) { return e.target_cruise_speed; });
  w.flee = span([](const EnvironmentParams& e) { return e.target_flee_speed; });
  w.threshold = span([](const EnvironmentParams& e) { return e.evasion_threshold; });
  return w;
}

CaseBase make_case_base(const ExperimentConfig& cfg) {
  CaseBase base;
  base.capacity = static_cast<std::size_t>(cfg.case_capacity);
  base.merge_radius = cfg.merge_radius;
  base.retrieval_radius = cfg.retrieval_radius;
  base.weights = schedule_weights(cfg);
  return base;
}

namespace {

// Top-k evaluated individuals by fitness, ties to the lowest index.
std::vector<StoredStrategy> top_k_strategies(const Population& pop, int k) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < pop.individuals.size(); ++i)
    if (pop.individuals[i].fitness) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return *pop.individuals[a].fitness > *pop.individuals[b].fitness;
  });
  if (order.size() > static_cast<std::size_t>(k)) order.resize(static_cast<std::size_t>(k));
  std::vector<StoredStrategy> out;
  out.reserve(order.size());
  for (std::size_t i : order)
    out.push_back({pop.individuals[i].strategy, *pop.individuals[i].fitness});
  return out;
}

RunLog run_loop(const ExperimentConfig& cfg, std::uint64_t seed, RunMode mode,
                CaseBase* case_base, bool parallel) {
  cfg.validate();
  if (mode == RunMode::CaseBased && !case_base)
    throw ConfigError("case_base", "case_based run requires a case base");

  Rng ga_rng(derive_seed(seed, kRoleGa));
  SimulationModel model{cfg.initial_model,
                        draw_seed_batch(cfg.ga.eval_trials, ga_rng), 0};
  Population pop = init_population(cfg.ga, {}, ga_rng);

  const BestView initial = best_strategy(pop);
  Published published{initial.strategy, initial.fitness, model.epoch, 0};

  MonitorState monitor(static_cast<std::size_t>(cfg.episode.ticks),
                       static_cast<std::size_t>(cfg.trigger.perf_window_len),
                       model.env_estimate.evasion_threshold);

  const bool monitored = mode != RunMode::Baseline;
  const int total = cfg.total_episodes();

  RunLog log;
  log.records.reserve(static_cast<std::size_t>(total));

  for (int e = 0; e < total; ++e) {
    const EnvironmentParams& true_env = cfg.env_of(e);

    Rng ep_rng(derive_seed(seed, kRoleEpisode, static_cast<std::uint64_t>(e), 0));
    EpisodeTrace trace;
    const EpisodeOutcome outcome =
        run_episode(published.strategy, true_env, cfg.episode, ep_rng, &trace);

    bool trigger_fired = false;
    std::optional<bool> case_hit;
    if (monitored) {
      monitor = monitor_update(monitor, trace, outcome);
      if (auto msg = trigger_check(monitor, model, cfg.trigger)) {
        trigger_fired = true;
        AdjustResult adj;
        if (mode == RunMode::CaseBased) {
          // Checkpoint the outgoing model's best strategies first. A fully
          // unevaluated population has nothing worth remembering.
          auto snapshot = top_k_strategies(pop, cfg.case_k);
          if (!snapshot.empty())
            store_case(*case_base, Case{model.env_estimate, std::move(snapshot),
                                        model.epoch, 0});
          adj = apply_adjustment(pop, model, *msg, AdjustmentMode::Reseed, case_base,
                                 cfg.ga, ga_rng);
        } else {
          adj = apply_adjustment(pop, model, *msg, AdjustmentMode::Restart, nullptr,
                                 cfg.ga, ga_rng);
        }
        pop = std::move(adj.population);
        model = std::move(adj.model);
        case_hit = adj.case_hit;
        monitor.on_model_adjusted(model.env_estimate.evasion_threshold);
      }
    }

    for (int g = 0; g < cfg.generations_per_episode; ++g)
      pop = evolve_generation(pop, cfg.ga, model, cfg.episode, ga_rng, parallel);
    evaluate_population(pop, model, cfg.episode, parallel);

    const BestView best = best_strategy(pop);
    published = publish_best(published, NewBestMsg{best.strategy, best.fitness,
                                                   model.epoch});

    EpisodeRecord rec;
    rec.episode = e;
    rec.phase = cfg.phase_of(e);
    rec.success = outcome.success;
    rec.published_fitness = published.fitness;
    rec.model_epoch = model.epoch;
    rec.trigger_fired = trigger_fired;
    if (monitored) rec.monitor_estimate = monitor.speed_estimate();
    rec.case_hit = case_hit;
    if (mode == RunMode::CaseBased) rec.case_base_size = case_base->cases.size();
    rec.strategy_version = published.version;
    log.records.push_back(std::move(rec));
  }
  return log;
}

}  // namespace

RunLog run_anytime(const ExperimentConfig& cfg, std::uint64_t seed, bool parallel) {
  return run_loop(cfg, seed, RunMode::Anytime, nullptr, parallel);
}

RunLog run_baseline(const ExperimentConfig& cfg, std::uint64_t seed, bool parallel) {
  return run_loop(cfg, seed, RunMode::Baseline, nullptr, parallel);
}

RunLog run_case_based(const ExperimentConfig& cfg, std::uint64_t seed,
                      CaseBase& case_base, bool parallel) {
  return run_loop(cfg, seed, RunMode::CaseBased, &case_base, parallel);
}

}  // namespace alsim
