#pragma once

#include <vector>

#include "alsim/world.hpp"

namespace alsim {

enum class KindMatch { Contact, Lost, Any };

// Interval condition over sensor buckets plus an action. The bearing
// interval may wrap (lo > hi means "lo..end plus start..hi").
struct Rule {
  KindMatch kind_match = KindMatch::Any;
  int range_lo = 0;
  int range_hi = kRangeBuckets - 1;
  int bearing_lo = 0;
  int bearing_hi = kBearingBuckets - 1;
  unsigned closing_mask = 0x7;  // bit per Closing value; must be nonempty
  Action action;
};

// Ordered rule list; the first matching rule wins, the default action
// covers everything else. This is the unit the learner evolves and the
// executor runs.
struct Strategy {
  std::vector<Rule> rules;
  Action default_action;
};

bool rule_matches(const Rule& r, const Observation& obs);

// First-match decision. Pure; never fails on a valid strategy.
Action decide(const Strategy& s, const Observation& obs);

// Throws StrategyError if the rule set breaks a structural invariant.
void validate_strategy(const Strategy& s);

bool strategies_equal(const Strategy& a, const Strategy& b);

}  // namespace alsim
