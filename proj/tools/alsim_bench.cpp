// Compares the serial reference population evaluation against the OpenMP
// kernel on identical inputs and verifies they agree.

#include <chrono>
#include <cstdio>
#include <vector>

#include "alsim/ga.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace alsim;

namespace {

double run_timed(Population pop, const SimulationModel& model, const EpisodeConfig& cfg,
                 bool parallel, std::vector<double>* fitness_out) {
  const auto t0 = std::chrono::steady_clock::now();
  evaluate_population(pop, model, cfg, parallel);
  const auto t1 = std::chrono::steady_clock::now();
  if (fitness_out) {
    fitness_out->clear();
    for (const Individual& ind : pop.individuals) fitness_out->push_back(*ind.fitness);
  }
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main() {
  GaParams params;
  params.pop_size = 200;
  params.eval_trials = 20;

  EpisodeConfig cfg{100, 10};
  Rng rng(42);
  SimulationModel model{EnvironmentParams{}, draw_seed_batch(params.eval_trials, rng), 0};
  Population pop = init_population(params, {}, rng);

#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both paths run serially\n");
#endif
  std::printf("population %d, %d trials x %d ticks per individual\n\n", params.pop_size,
              params.eval_trials, cfg.ticks);

  std::vector<double> fit_serial, fit_parallel;
  const double t_serial = run_timed(pop, model, cfg, false, &fit_serial);
  const double t_parallel = run_timed(pop, model, cfg, true, &fit_parallel);

  const bool identical = fit_serial == fit_parallel;
  std::printf("serial reference : %8.3f s\n", t_serial);
  std::printf("openmp kernel    : %8.3f s\n", t_parallel);
  std::printf("speedup          : %8.2fx\n", t_serial / t_parallel);
  std::printf("results identical: %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
