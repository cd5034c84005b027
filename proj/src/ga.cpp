#include "alsim/ga.hpp"

#include <algorithm>
#include <numeric>

namespace alsim {

void GaParams::validate() const {
  if (pop_size < 2) throw ConfigError("pop_size", "must be >= 2");
  if (eval_trials < 1) throw ConfigError("eval_trials", "must be >= 1");
  if (elitism < 1 || elitism >= pop_size)
    throw ConfigError("elitism", "must be in [1, pop_size)");
  if (tournament_k < 1 || tournament_k > pop_size)
    throw ConfigError("tournament_k", "must be in [1, pop_size]");
  if (crossover_rate < 0.0 || crossover_rate > 1.0)
    throw ConfigError("crossover_rate", "must be in [0, 1]");
  if (mutation_rate < 0.0 || mutation_rate > 1.0)
    throw ConfigError("mutation_rate", "must be in [0, 1]");
  if (rule_count_min < 1 || rule_count_max < rule_count_min)
    throw ConfigError("rule_count_min", "need 1 <= min <= max");
  if (!(max_turn > 0.0) || max_turn > kPi)
    throw ConfigError("max_turn", "must be in (0, pi]");
  if (!(max_speed > 0.0)) throw ConfigError("max_speed", "must be > 0");
}

std::vector<std::uint64_t> draw_seed_batch(int n, Rng& rng) {
  std::vector<std::uint64_t> batch(static_cast<std::size_t>(n));
  for (auto& s : batch) s = rng.next_u64();
  return batch;
}

namespace {

Rule random_rule(const GaParams& p, Rng& rng) {
  Rule r;
  switch (rng.uniform_int(3)) {
    case 0: r.kind_match = KindMatch::Contact; break;
    case 1: r.kind_match = KindMatch::Lost; break;
    default: r.kind_match = KindMatch::Any; break;
  }
  int a = static_cast<int>(rng.uniform_int(kRangeBuckets));
  int b = static_cast<int>(rng.uniform_int(kRangeBuckets));
  r.range_lo = std::min(a, b);
  r.range_hi = std::max(a, b);
  r.bearing_lo = static_cast<int>(rng.uniform_int(kBearingBuckets));
  r.bearing_hi = static_cast<int>(rng.uniform_int(kBearingBuckets));
  r.closing_mask = 1u + static_cast<unsigned>(rng.uniform_int(7));
  r.action.turn = rng.uniform(-p.max_turn, p.max_turn);
  r.action.speed = rng.uniform(0.0, p.max_speed);
  return r;
}

// One field of one rule is a gene; each gene rewrites independently.
void mutate_strategy(Strategy& s, const GaParams& p, Rng& rng) {
  const auto hit = [&] { return rng.uniform01() < p.mutation_rate; };
  for (Rule& r : s.rules) {
    if (hit()) {
      switch (rng.uniform_int(3)) {
        case 0: r.kind_match = KindMatch::Contact; break;
        case 1: r.kind_match = KindMatch::Lost; break;
        default: r.kind_match = KindMatch::Any; break;
      }
    }
    if (hit()) {
      int a = static_cast<int>(rng.uniform_int(kRangeBuckets));
      int b = static_cast<int>(rng.uniform_int(kRangeBuckets));
      r.range_lo = std::min(a, b);
      r.range_hi = std::max(a, b);
    }
    if (hit()) {
      r.bearing_lo = static_cast<int>(rng.uniform_int(kBearingBuckets));
      r.bearing_hi = static_cast<int>(rng.uniform_int(kBearingBuckets));
    }
    if (hit()) r.closing_mask = 1u + static_cast<unsigned>(rng.uniform_int(7));
    if (hit()) r.action.turn = rng.uniform(-p.max_turn, p.max_turn);
    if (hit()) r.action.speed = rng.uniform(0.0, p.max_speed);
  }
  if (hit()) s.default_action.turn = rng.uniform(-p.max_turn, p.max_turn);
  if (hit()) s.default_action.speed = rng.uniform(0.0, p.max_speed);
}

// One-point crossover with independent cut points. The tail length drawn
// from parent b is constrained so the child stays within rule_count bounds.
Strategy crossover(const Strategy& pa, const Strategy& pb, const GaParams& p, Rng& rng) {
  const int len_a = static_cast<int>(pa.rules.size());
  const int len_b = static_cast<int>(pb.rules.size());
  // Parents normally respect rule_count bounds; clamp anyway so foreign
  // seed strategies of unusual length cannot push the draw out of range.
  const int cut_cap = std::min(len_a, p.rule_count_max);
  const int cut_a = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(cut_cap) + 1));
  const int tail_min = std::clamp(p.rule_count_min - cut_a, cut_a == 0 ? 1 : 0, len_b);
  const int tail_max = std::clamp(p.rule_count_max - cut_a, tail_min, len_b);
  const int tail = tail_min + static_cast<int>(rng.uniform_int(
                                  static_cast<std::uint64_t>(tail_max - tail_min) + 1));
  Strategy child;
  child.rules.assign(pa.rules.begin(), pa.rules.begin() + cut_a);
  child.rules.insert(child.rules.end(), pb.rules.end() - tail, pb.rules.end());
  child.default_action = rng.uniform01() < 0.5 ? pa.default_action : pb.default_action;
  return child;
}

std::size_t tournament_pick(const Population& pop, int k, Rng& rng) {
  std::size_t best = rng.uniform_int(pop.individuals.size());
  for (int i = 1; i < k; ++i) {
    std::size_t c = rng.uniform_int(pop.individuals.size());
    const double fb = pop.individuals[best].fitness.value_or(0.0);
    const double fc = pop.individuals[c].fitness.value_or(0.0);
    if (fc > fb || (fc == fb && c < best)) best = c;
  }
  return best;
}

}  // namespace

Strategy random_strategy(const GaParams& params, Rng& rng) {
  Strategy s;
  const int span = params.rule_count_max - params.rule_count_min + 1;
  const int count = params.rule_count_min +
                    static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(span)));
  s.rules.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) s.rules.push_back(random_rule(params, rng));
  s.default_action.turn = rng.uniform(-params.max_turn, params.max_turn);
  s.default_action.speed = rng.uniform(0.0, params.max_speed);
  return s;
}

double evaluate(const Strategy& strategy, const SimulationModel& model,
                const EpisodeConfig& cfg) {
  if (model.eval_seed_batch.empty())
    throw ConfigError("eval_seed_batch", "empty evaluation batch");
  int successes = 0;
  for (std::uint64_t seed : model.eval_seed_batch) {
    Rng rng(seed);
    if (run_episode(strategy, model.env_estimate, cfg, rng).success) ++successes;
  }
  return static_cast<double>(successes) /
         static_cast<double>(model.eval_seed_batch.size());
}

void evaluate_population_serial(Population& pop, const SimulationModel& model,
                                const EpisodeConfig& cfg) {
  for (Individual& ind : pop.individuals)
    if (!ind.fitness) ind.fitness = evaluate(ind.strategy, model, cfg);
}

void evaluate_population_parallel(Population& pop, const SimulationModel& model,
                                  const EpisodeConfig& cfg) {
  if (model.eval_seed_batch.empty())
    throw ConfigError("eval_seed_batch", "empty evaluation batch");
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < pop.individuals.size(); ++i)
    if (!pop.individuals[i].fitness) todo.push_back(i);
  for (std::size_t i : todo) validate_strategy(pop.individuals[i].strategy);

#pragma omp parallel for schedule(dynamic)
  for (long n = 0; n < static_cast<long>(todo.size()); ++n) {
    Individual& ind = pop.individuals[todo[static_cast<std::size_t>(n)]];
    ind.fitness = evaluate(ind.strategy, model, cfg);
  }
}

void evaluate_population(Population& pop, const SimulationModel& model,
                         const EpisodeConfig& cfg, bool parallel) {
  if (parallel)
    evaluate_population_parallel(pop, model, cfg);
  else
    evaluate_population_serial(pop, model, cfg);
}

Population init_population(const GaParams& params, const std::vector<Strategy>& seeds,
                           Rng& rng) {
  params.validate();
  for (const Strategy& s : seeds) validate_strategy(s);

  Population pop;
  pop.generation = 0;
  pop.individuals.reserve(static_cast<std::size_t>(params.pop_size));
  const std::size_t n_seeded =
      std::min(seeds.size(), static_cast<std::size_t>(params.pop_size));
  for (std::size_t i = 0; i < n_seeded; ++i)
    pop.individuals.push_back({seeds[i], std::nullopt});
  while (pop.individuals.size() < static_cast<std::size_t>(params.pop_size))
    pop.individuals.push_back({random_strategy(params, rng), std::nullopt});
  return pop;
}

Population evolve_generation(const Population& pop, const GaParams& params,
                             const SimulationModel& model, const EpisodeConfig& cfg,
                             Rng& rng, bool parallel) {
  params.validate();
  Population cur = pop;
  evaluate_population(cur, model, cfg, parallel);

  // Elites: highest fitness first, ties to the lowest index.
  std::vector<std::size_t> order(cur.individuals.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return *cur.individuals[a].fitness > *cur.individuals[b].fitness;
  });

  Population next;
  next.generation = cur.generation + 1;
  next.individuals.reserve(cur.individuals.size());
  for (int e = 0; e < params.elitism; ++e)
    next.individuals.push_back(cur.individuals[order[static_cast<std::size_t>(e)]]);

  while (next.individuals.size() < cur.individuals.size()) {
    const std::size_t a = tournament_pick(cur, params.tournament_k, rng);
    Strategy child;
    if (rng.uniform01() < params.crossover_rate) {
      const std::size_t b = tournament_pick(cur, params.tournament_k, rng);
      child = crossover(cur.individuals[a].strategy, cur.individuals[b].strategy,
                        params, rng);
    } else {
      child = cur.individuals[a].strategy;
    }
    mutate_strategy(child, params, rng);
    next.individuals.push_back({std::move(child), std::nullopt});
  }
  return next;
}

BestView best_strategy(const Population& pop) {
  if (pop.individuals.empty()) throw ConfigError("population", "empty population");
  const Individual* best = nullptr;
  for (const Individual& ind : pop.individuals) {
    if (!ind.fitness) continue;
    if (!best || *ind.fitness > *best->fitness) best = &ind;
  }
  if (!best) return {pop.individuals.front().strategy, 0.0, true};
  return {best->strategy, *best->fitness, false};
}

}  // namespace alsim
