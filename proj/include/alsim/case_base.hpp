#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "alsim/strategy.hpp"
#include "alsim/world.hpp"

namespace alsim {

// Per-parameter normalization scales for the case metric.
struct CaseWeights {
  double cruise = 1.0;
  double flee = 1.0;
  double threshold = 1.0;
};

struct StoredStrategy {
  Strategy strategy;
  double fitness = 0.0;  // fitness at storage time
};

// A remembered environment and the strategies that worked there.
struct Case {
  EnvironmentParams env_key;
  std::vector<StoredStrategy> seed_strategies;
  long stored_at_epoch = 0;
  long last_touch = 0;  // recency clock value; drives eviction
};

struct CaseBase {
  std::vector<Case> cases;
  std::size_t capacity = 16;
  double merge_radius = 0.05;
  double retrieval_radius = 0.25;
  CaseWeights weights;
  long clock = 0;
};

// Normalized Euclidean distance over (cruise speed, flee speed, evasion
// threshold). Symmetric, zero iff the compared fields are equal.
double case_distance(const EnvironmentParams& a, const EnvironmentParams& b,
                     const CaseWeights& weights);

// Nearest stored case within the retrieval radius, ties to the earliest
// stored. A hit refreshes the case's recency stamp.
std::optional<Case> nn_retrieve(CaseBase& base, const EnvironmentParams& query);

// Replaces any case within merge_radius of the key, otherwise appends;
// over capacity the least-recently-retrieved case is evicted.
void store_case(CaseBase& base, Case c);

void save_case_base(const CaseBase& base, const std::string& path);
CaseBase load_case_base(const std::string& path);

}  // namespace alsim
