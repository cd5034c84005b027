#include <doctest.h>

#include "alsim/ga.hpp"
#include "helpers.hpp"
#include "oracle.hpp"

using namespace alsim;

namespace {

GaParams small_params() {
  GaParams p;
  p.pop_size = 10;
  p.eval_trials = 5;
  p.elitism = 2;
  p.tournament_k = 3;
  p.rule_count_min = 1;
  p.rule_count_max = 5;
  return p;
}

SimulationModel small_model(std::uint64_t seed, int trials) {
  Rng rng(seed);
  return SimulationModel{testutil::quiet_env(), draw_seed_batch(trials, rng), 0};
}

}  // namespace

TEST_CASE("decide falls back to the default action") {
  Strategy s;
  Rule r;
  r.kind_match = KindMatch::Contact;
  r.range_lo = r.range_hi = 0;
  r.action = {0.5, 1.0};
  s.rules.push_back(r);
  s.default_action = {-0.2, 0.3};
  Observation obs{ObsKind::Contact, 5, 0, Closing::Steady};
  Action a = decide(s, obs);
  CHECK(a.turn == -0.2);
  CHECK(a.speed == 0.3);
}

TEST_CASE("decide takes the first of two matching rules") {
  Strategy s;
  Rule r1;
  r1.action = {0.1, 0.1};
  Rule r2;
  r2.action = {0.9, 0.9};
  s.rules = {r1, r2};  // both match anything
  Observation obs{ObsKind::Contact, 3, 3, Closing::Closing};
  CHECK(decide(s, obs).turn == 0.1);
}

TEST_CASE("decide match predicate over an enumerated rule") {
  Strategy s;
  Rule r;
  r.kind_match = KindMatch::Contact;
  r.range_lo = 0;
  r.range_hi = 7;
  r.bearing_lo = 0;
  r.bearing_hi = 7;
  r.closing_mask = 1u << static_cast<int>(Closing::Closing);
  r.action = {0.4, 1.7};
  s.rules.push_back(r);
  s.default_action = {0.0, 0.0};

  Observation obs{ObsKind::Contact, 3, 2, Closing::Closing};
  CHECK(decide(s, obs).speed == 1.7);
  obs.closing = Closing::Opening;  // closing set excludes it
  CHECK(decide(s, obs).speed == 0.0);
  obs.kind = ObsKind::Lost;  // Contact-only rule cannot fire on Lost
  CHECK(decide(s, obs).speed == 0.0);
}

TEST_CASE("wrapping bearing interval matches across the seam") {
  Rule r;
  r.bearing_lo = 6;
  r.bearing_hi = 1;
  Observation obs{ObsKind::Contact, 0, 7, Closing::Steady};
  CHECK(rule_matches(r, obs));
  obs.bearing_bucket = 0;
  CHECK(rule_matches(r, obs));
  obs.bearing_bucket = 3;
  CHECK_FALSE(rule_matches(r, obs));
}

TEST_CASE("decide returns in-limit actions for random strategies and observations") {
  GaParams p = small_params();
  Rng rng(17);
  for (int i = 0; i < 200; ++i) {
    Strategy s = random_strategy(p, rng);
    Observation obs;
    obs.kind = rng.uniform01() < 0.2 ? ObsKind::Lost : ObsKind::Contact;
    obs.range_bucket = static_cast<int>(rng.uniform_int(kRangeBuckets));
    obs.bearing_bucket = static_cast<int>(rng.uniform_int(kBearingBuckets));
    obs.closing = static_cast<Closing>(rng.uniform_int(3));
    Action a = decide(s, obs);
    REQUIRE(std::abs(a.turn) <= p.max_turn);
    REQUIRE(a.speed >= 0.0);
    REQUIRE(a.speed <= p.max_speed);
  }
}

TEST_CASE("evaluate rejects an empty seed batch") {
  SimulationModel model{testutil::quiet_env(), {}, 0};
  EpisodeConfig cfg{20, 2};
  CHECK_THROWS_AS(evaluate(testutil::idle_strategy(), model, cfg), ConfigError);
}

TEST_CASE("evaluate is deterministic on the fixed batch") {
  SimulationModel model = small_model(42, 8);
  EpisodeConfig cfg{40, 4};
  Strategy s = testutil::pursuit_strategy(0.7, 2.0, 0.4);
  CHECK(evaluate(s, model, cfg) == evaluate(s, model, cfg));
}

TEST_CASE("pursuit beats idling on the shared batch, agreeing with the oracle") {
  SimulationModel model = small_model(42, 10);
  EpisodeConfig cfg{60, 6};
  Strategy pursuit = testutil::pursuit_strategy(0.7, 2.0, 0.4);
  Strategy idle = testutil::idle_strategy();

  const auto oracle_fitness = [&](const Strategy& s) {
    int wins = 0;
    for (std::uint64_t seed : model.eval_seed_batch)
      if (oracle::simulate(s, model.env_estimate, cfg.ticks, cfg.success_window, seed)
              .success)
        ++wins;
    return static_cast<double>(wins) /
           static_cast<double>(model.eval_seed_batch.size());
  };

  const double fp = evaluate(pursuit, model, cfg);
  const double fi = evaluate(idle, model, cfg);
  CHECK(fp == oracle_fitness(pursuit));
  CHECK(fi == oracle_fitness(idle));
  CHECK(fp >= fi);
  CHECK(fp > 0.5);  // pursuit actually tracks in the quiet environment
}

TEST_CASE("init_population fills with random strategies") {
  GaParams p = small_params();
  Rng rng(1);
  Population pop = init_population(p, {}, rng);
  CHECK(pop.individuals.size() == 10);
  CHECK(pop.generation == 0);
  for (const Individual& ind : pop.individuals) {
    CHECK_FALSE(ind.fitness.has_value());
    CHECK(ind.strategy.rules.size() >= 1);
    CHECK(ind.strategy.rules.size() <= 5);
  }
}

TEST_CASE("init_population places seeds at the head and truncates overflow") {
  GaParams p = small_params();
  p.pop_size = 3;
  p.elitism = 1;
  p.tournament_k = 2;
  Strategy a = testutil::idle_strategy();
  Strategy b = testutil::pursuit_strategy(0.7, 2.0, 0.4);
  Rng rng(1);
  Population pop = init_population(p, {a, b}, rng);
  CHECK(strategies_equal(pop.individuals[0].strategy, a));
  CHECK(strategies_equal(pop.individuals[1].strategy, b));

  std::vector<Strategy> many(5, a);
  Rng rng2(1);
  Population pop2 = init_population(p, many, rng2);
  CHECK(pop2.individuals.size() == 3);
  for (const Individual& ind : pop2.individuals)
    CHECK(strategies_equal(ind.strategy, a));
}

TEST_CASE("elitism makes the best fitness non-decreasing") {
  GaParams p = small_params();
  SimulationModel model = small_model(5, 5);
  EpisodeConfig cfg{30, 3};
  Rng rng(9);
  Population pop = init_population(p, {}, rng);
  double last = -1.0;
  for (int g = 0; g < 12; ++g) {
    pop = evolve_generation(pop, p, model, cfg, rng);
    evaluate_population(pop, model, cfg, false);
    const BestView best = best_strategy(pop);
    REQUIRE(best.fitness >= last);
    last = best.fitness;
  }
}

TEST_CASE("no-op operators reproduce identical strategies") {
  GaParams p = small_params();
  p.crossover_rate = 0.0;
  p.mutation_rate = 0.0;
  SimulationModel model = small_model(5, 5);
  EpisodeConfig cfg{20, 2};
  Strategy s = testutil::pursuit_strategy(0.7, 2.0, 0.4);
  Rng rng(3);
  Population pop = init_population(p, std::vector<Strategy>(10, s), rng);
  Population next = evolve_generation(pop, p, model, cfg, rng);
  CHECK(next.generation == 1);
  for (const Individual& ind : next.individuals)
    CHECK(strategies_equal(ind.strategy, s));
}

TEST_CASE("evolution preserves population size and rule invariants") {
  GaParams p = small_params();
  SimulationModel model = small_model(7, 4);
  EpisodeConfig cfg{20, 2};
  Rng rng(21);
  Population pop = init_population(p, {}, rng);
  for (int g = 0; g < 100; ++g) {
    pop = evolve_generation(pop, p, model, cfg, rng);
    REQUIRE(pop.individuals.size() == static_cast<std::size_t>(p.pop_size));
    for (const Individual& ind : pop.individuals) {
      REQUIRE_NOTHROW(validate_strategy(ind.strategy));
      REQUIRE(ind.strategy.rules.size() >= static_cast<std::size_t>(p.rule_count_min));
      REQUIRE(ind.strategy.rules.size() <= static_cast<std::size_t>(p.rule_count_max));
      for (const Rule& r : ind.strategy.rules) {
        REQUIRE(std::abs(r.action.turn) <= p.max_turn);
        REQUIRE(r.action.speed <= p.max_speed);
      }
    }
  }
  CHECK(pop.generation == 100);
}

TEST_CASE("best_strategy picks the max, breaking ties by index") {
  GaParams p = small_params();
  Rng rng(2);
  Population pop = init_population(p, {}, rng);

  SUBCASE("fully unevaluated population answers provisionally") {
    BestView best = best_strategy(pop);
    CHECK(best.provisional);
    CHECK(best.fitness == 0.0);
    CHECK(strategies_equal(best.strategy, pop.individuals[0].strategy));
  }

  SUBCASE("single evaluated individual wins") {
    pop.individuals[4].fitness = 0.25;
    BestView best = best_strategy(pop);
    CHECK_FALSE(best.provisional);
    CHECK(best.fitness == 0.25);
    CHECK(strategies_equal(best.strategy, pop.individuals[4].strategy));
  }

  SUBCASE("ties break to the lowest index") {
    pop.individuals[2].fitness = 0.5;
    pop.individuals[6].fitness = 0.5;
    BestView best = best_strategy(pop);
    CHECK(strategies_equal(best.strategy, pop.individuals[2].strategy));
  }
}

TEST_CASE("best fitness is non-decreasing across 50 generations") {
  GaParams p = small_params();
  p.pop_size = 8;
  p.eval_trials = 4;
  SimulationModel model = small_model(11, 4);
  EpisodeConfig cfg{20, 2};
  Rng rng(13);
  Population pop = init_population(p, {}, rng);
  double last = 0.0;
  for (int g = 0; g < 50; ++g) {
    pop = evolve_generation(pop, p, model, cfg, rng);
    evaluate_population(pop, model, cfg, false);
    const double f = best_strategy(pop).fitness;
    REQUIRE(f >= last);
    last = f;
  }
}

TEST_CASE("serial and parallel population evaluation agree exactly") {
  GaParams p = small_params();
  p.pop_size = 16;
  SimulationModel model = small_model(31, 6);
  EpisodeConfig cfg{30, 3};
  Rng rng(55);
  Population serial_pop = init_population(p, {}, rng);
  Population parallel_pop = serial_pop;

  evaluate_population_serial(serial_pop, model, cfg);
  evaluate_population_parallel(parallel_pop, model, cfg);
  for (std::size_t i = 0; i < serial_pop.individuals.size(); ++i)
    REQUIRE(*serial_pop.individuals[i].fitness == *parallel_pop.individuals[i].fitness);
}
