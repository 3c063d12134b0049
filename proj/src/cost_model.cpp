#include "morphsim/cost_model.hpp"

#include <stdexcept>

namespace morphsim {

std::vector<std::string> CostParams::validate() const {
  if (kappa >= delta) {
    throw std::invalid_argument("cost model requires kappa < delta");
  }
  if (mu < delta) {
    throw std::invalid_argument("cost model requires mu >= delta");
  }
  std::vector<std::string> warnings;
  if (mu < 10 * delta) {
    warnings.push_back("mu is expected to dominate delta; mu < 10*delta");
  }
  return warnings;
}

std::uint64_t action_cost(const Action& a, const CostParams& p) {
  switch (a.kind) {
    case ActionKind::ref_read:
    case ActionKind::ref_write:
    case ActionKind::store_read:
    case ActionKind::pull_read:
    case ActionKind::store_update:
    case ActionKind::lock_acquire:
    case ActionKind::lock_release:
      return p.delta;
    case ActionKind::local_read:
    case ActionKind::local_write:
      return p.kappa;
    case ActionKind::tau:
      return p.theta;
    case ActionKind::evict:
      return 0;
    case ActionKind::cache_update:
      // Within one cluster both indices alias the same cache; the machine
      // never emits that case, but the table still covers it.
      return a.actor == a.target ? 0 : p.delta;
    case ActionKind::reconf:
      return p.mu;
  }
  return 0;
}

std::uint64_t trace_cost(const Trace& t, const CostParams& p) {
  std::uint64_t sum = 0;
  for (const auto& step : t) sum += action_cost(step.action, p);
  return sum;
}

Trace cost_trace(const std::vector<Action>& actions, const CostParams& p) {
  Trace t;
  t.reserve(actions.size());
  for (const auto& a : actions) t.push_back({a, action_cost(a, p)});
  return t;
}

BreakevenReport breakeven_report(const Trace& t, const CostParams& p) {
  p.validate();
  BreakevenReport r;
  const std::uint64_t gain = p.delta - p.kappa;
  for (const auto& step : t) {
    switch (step.action.kind) {
      case ActionKind::local_write:
        ++r.deferred_writes;
        ++r.cheap_ops;
        break;
      case ActionKind::local_read:
        ++r.cheap_ops;
        break;
      case ActionKind::evict:
      case ActionKind::cache_update:
      case ActionKind::store_update:
        r.flush_overhead += action_cost(step.action, p);
        break;
      default:
        break;
    }
  }
  r.additional_cheap_ops = r.cheap_ops - r.deferred_writes;
  r.savings = r.cheap_ops * gain;
  r.credit = static_cast<std::int64_t>(r.deferred_writes * gain) -
             static_cast<std::int64_t>(r.flush_overhead);
  r.net = static_cast<std::int64_t>(r.savings) -
          static_cast<std::int64_t>(r.flush_overhead);
  r.breakeven_count = (r.deferred_writes * p.kappa + gain - 1) / gain;
  r.cleared = r.additional_cheap_ops >= r.breakeven_count;
  return r;
}

}  // namespace morphsim
