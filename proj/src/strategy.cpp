#include "alsim/strategy.hpp"

#include <cmath>

namespace alsim {

namespace {

bool bearing_in_interval(int b, int lo, int hi) {
  if (lo <= hi) return b >= lo && b <= hi;
  return b >= lo || b <= hi;  // wrapping interval
}

}  // namespace

bool rule_matches(const Rule& r, const Observation& obs) {
  if (obs.kind == ObsKind::Lost) return r.kind_match != KindMatch::Contact;
  if (r.kind_match == KindMatch::Lost) return false;
  if (obs.range_bucket < r.range_lo || obs.range_bucket > r.range_hi) return false;
  if (!bearing_in_interval(obs.bearing_bucket, r.bearing_lo, r.bearing_hi)) return false;
  return (r.closing_mask >> static_cast<int>(obs.closing)) & 1u;
}

Action decide(const Strategy& s, const Observation& obs) {
  for (const Rule& r : s.rules)
    if (rule_matches(r, obs)) return r.action;
  return s.default_action;
}

void validate_strategy(const Strategy& s) {
  if (s.rules.empty()) throw StrategyError("strategy has no rules");
  const auto check_action = [](const Action& a) {
    if (!std::isfinite(a.turn) || !std::isfinite(a.speed) || a.speed < 0.0)
      throw StrategyError("action out of range");
  };
  for (const Rule& r : s.rules) {
    if (r.range_lo < 0 || r.range_hi >= kRangeBuckets || r.range_lo > r.range_hi)
      throw StrategyError("bad range interval");
    if (r.bearing_lo < 0 || r.bearing_lo >= kBearingBuckets || r.bearing_hi < 0 ||
        r.bearing_hi >= kBearingBuckets)
      throw StrategyError("bad bearing interval");
    if (r.closing_mask == 0 || r.closing_mask > 0x7)
      throw StrategyError("empty closing set");
    check_action(r.action);
  }
  check_action(s.default_action);
}

bool strategies_equal(const Strategy& a, const Strategy& b) {
  if (a.rules.size() != b.rules.size()) return false;
  const auto act_eq = [](const Action& x, const Action& y) {
    return x.turn == y.turn && x.speed == y.speed;
  };
  for (std::size_t i = 0; i < a.rules.size(); ++i) {
    const Rule& x = a.rules[i];
    const Rule& y = b.rules[i];
    if (x.kind_match != y.kind_match || x.range_lo != y.range_lo ||
        x.range_hi != y.range_hi || x.bearing_lo != y.bearing_lo ||
        x.bearing_hi != y.bearing_hi || x.closing_mask != y.closing_mask ||
        !act_eq(x.action, y.action))
      return false;
  }
  return act_eq(a.default_action, b.default_action);
}

}  // namespace alsim
