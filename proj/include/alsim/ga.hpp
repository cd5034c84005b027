#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "alsim/episode.hpp"
#include "alsim/strategy.hpp"

namespace alsim {

struct GaParams {
  int pop_size = 50;
  int eval_trials = 12;
  int elitism = 2;
  int tournament_k = 3;
  double crossover_rate = 0.8;
  double mutation_rate = 0.15;
  int rule_count_min = 2;
  int rule_count_max = 8;
  // Actuator limits used when generating and mutating actions.
  double max_turn = 0.7;
  double max_speed = 2.0;

  void validate() const;
};

struct Individual {
  Strategy strategy;
  std::optional<double> fitness;  // mean episode success over the eval batch
};

struct Population {
  std::vector<Individual> individuals;
  long generation = 0;
};

// The learner's stand-in for the real environment plus the frozen seed
// batch every individual is scored on. The batch is re-drawn only when the
// model is adjusted, which keeps fitness exactly comparable within an epoch.
struct SimulationModel {
  EnvironmentParams env_estimate;
  std::vector<std::uint64_t> eval_seed_batch;
  long epoch = 0;
};

std::vector<std::uint64_t> draw_seed_batch(int n, Rng& rng);

Strategy random_strategy(const GaParams& params, Rng& rng);

// Fraction of successful episodes over the model's seed batch.
// Deterministic given the model. Throws ConfigError on an empty batch.
double evaluate(const Strategy& strategy, const SimulationModel& model,
                const EpisodeConfig& cfg);

// Scores every unevaluated individual. The parallel path distributes
// individuals across OpenMP threads; each episode draws from its own seed,
// so serial and parallel runs produce identical fitness vectors. The serial
// path is the reference the tests compare against.
void evaluate_population_serial(Population& pop, const SimulationModel& model,
                                const EpisodeConfig& cfg);
void evaluate_population_parallel(Population& pop, const SimulationModel& model,
                                  const EpisodeConfig& cfg);
void evaluate_population(Population& pop, const SimulationModel& model,
                         const EpisodeConfig& cfg, bool parallel);

// Seeded individuals occupy the head of the population (overflow truncates);
// the rest are random. Everything starts unevaluated at generation 0.
Population init_population(const GaParams& params, const std::vector<Strategy>& seeds,
                           Rng& rng);

// One GA step: evaluate, keep the elites, refill by tournament selection
// with one-point rule-list crossover and per-field mutation.
Population evolve_generation(const Population& pop, const GaParams& params,
                             const SimulationModel& model, const EpisodeConfig& cfg,
                             Rng& rng, bool parallel = false);

struct BestView {
  Strategy strategy;
  double fitness = 0.0;
  bool provisional = false;  // true when nothing has been evaluated yet
};

// The anytime answer: best evaluated individual, ties to the lowest index.
// Never blocks and never fails; an unevaluated population yields individual
// 0 with provisional fitness 0.
BestView best_strategy(const Population& pop);

}  // namespace alsim
