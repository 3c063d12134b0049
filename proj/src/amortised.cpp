#include "morphsim/amortised.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <tuple>

namespace morphsim {

namespace {

constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();

// Min-cost internal closure (Dijkstra over unobservable edges).  With
// nonnegative costs the optimum is a simple path, so the no-repeat rule on
// response segments costs nothing.
struct ClosureOracle {
  const LtsCore& lts;
  const ObsConfig& cfg;
  std::map<StateId, std::map<StateId, std::uint64_t>> cache;

  const std::map<StateId, std::uint64_t>& closure(StateId from) {
    auto it = cache.find(from);
    if (it != cache.end()) return it->second;
    std::map<StateId, std::uint64_t> dist;
    using Item = std::pair<std::uint64_t, StateId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[from] = 0;
    pq.push({0, from});
    while (!pq.empty()) {
      auto [d, s] = pq.top();
      pq.pop();
      if (d > dist[s]) continue;
      for (const auto& e : lts.adj[s]) {
        if (is_observable(e.action, cfg)) continue;
        std::uint64_t nd = d + e.cost;
        auto f = dist.find(e.dst);
        if (f == dist.end() || nd < f->second) {
          dist[e.dst] = nd;
          pq.push({nd, e.dst});
        }
      }
    }
    return cache.emplace(from, std::move(dist)).first->second;
  }

  std::map<StateId, std::uint64_t> responses(StateId from, const Action& challenge) {
    const auto& pre = closure(from);
    if (!is_observable(challenge, cfg)) return pre;
    std::map<StateId, std::uint64_t> out;
    for (const auto& [mid, pre_cost] : pre) {
      for (const auto& e : lts.adj[mid]) {
        if (!functionally_equivalent(challenge, e.action, cfg)) continue;
        for (const auto& [end, post_cost] : closure(e.dst)) {
          std::uint64_t total = pre_cost + e.cost + post_cost;
          auto f = out.find(end);
          if (f == out.end() || total < f->second) out[end] = total;
        }
      }
    }
    return out;
  }

  // Same responses, but materialising the concrete action sequence of one
  // cheapest reply per end state (used for witness rendering).
  std::map<StateId, Trace> response_paths(StateId from, const Action& challenge) {
    std::map<StateId, Trace> paths;
    std::map<StateId, std::uint64_t> best;
    auto walk_closure = [&](StateId start) {
      // Rebuild one shortest internal path per closure state, walking the
      // states in distance order so predecessors are settled first.
      const auto& dist = closure(start);
      std::map<StateId, Trace> local;
      local[start] = {};
      std::vector<StateId> order;
      for (const auto& [s, d] : dist) order.push_back(s);
      std::sort(order.begin(), order.end(), [&](StateId a, StateId b) {
        return dist.at(a) < dist.at(b) || (dist.at(a) == dist.at(b) && a < b);
      });
      for (StateId s : order) {
        if (!local.count(s)) continue;
        for (const auto& e : lts.adj[s]) {
          if (is_observable(e.action, cfg)) continue;
          if (dist.at(s) + e.cost == dist.at(e.dst) && !local.count(e.dst)) {
            Trace t = local[s];
            t.push_back({e.action, e.cost});
            local[e.dst] = std::move(t);
          }
        }
      }
      return local;
    };

    auto pre_paths = walk_closure(from);
    if (!is_observable(challenge, cfg)) return pre_paths;
    for (const auto& [mid, pre_trace] : pre_paths) {
      for (const auto& e : lts.adj[mid]) {
        if (!functionally_equivalent(challenge, e.action, cfg)) continue;
        auto post_paths = walk_closure(e.dst);
        for (const auto& [end, post_trace] : post_paths) {
          Trace full = pre_trace;
          full.push_back({e.action, e.cost});
          full.insert(full.end(), post_trace.begin(), post_trace.end());
          std::uint64_t cost = 0;
          for (const auto& st : full) cost += st.cost;
          auto f = best.find(end);
          if (f == best.end() || cost < f->second) {
            best[end] = cost;
            paths[end] = std::move(full);
          }
        }
      }
    }
    return paths;
  }
};

struct PairKey {
  StateId left, right;
  auto operator<=>(const PairKey&) const = default;
};

struct Challenge {
  int side;  // 1: left moved, 2: right moved
  const LtsEdge* edge;
  std::uint64_t charged_cost;  // what the credit update charges the mover
  // (next pair id, credit delta) per defender response
  std::vector<std::pair<std::uint32_t, std::int64_t>> responses;
};

struct GameGraph {
  std::vector<PairKey> pairs;
  std::map<PairKey, std::uint32_t> index;
  std::vector<std::vector<Challenge>> challenges;
};

}  // namespace

std::map<StateId, std::uint64_t> weak_responses(const LtsCore& lts, StateId from,
                                                const Action& challenge,
                                                const CostParams& p,
                                                const ObsConfig& cfg) {
  (void)p;  // edge costs were fixed at exploration time
  ClosureOracle oracle{lts, cfg, {}};
  return oracle.responses(from, challenge);
}

AmortisedVerdict amortised_compare(const LtsCore& lhs, const LtsCore& rhs,
                                   const CostParams& p,
                                   std::uint64_t credit_cap,
                                   const ObsConfig& cfg,
                                   std::uint64_t pair_cap) {
  p.validate();
  ClosureOracle left_oracle{lhs, cfg, {}};
  ClosureOracle right_oracle{rhs, cfg, {}};

  auto obs_cost = [&](const Action& a, std::uint64_t edge_cost) -> std::uint64_t {
    return is_observable(a, cfg) ? edge_cost : 0;
  };

  GameGraph g;
  auto intern = [&](PairKey k) -> std::uint32_t {
    auto it = g.index.find(k);
    if (it != g.index.end()) return it->second;
    if (g.pairs.size() >= pair_cap) throw ResourceLimit("game pairs", pair_cap);
    std::uint32_t id = static_cast<std::uint32_t>(g.pairs.size());
    g.index.emplace(k, id);
    g.pairs.push_back(k);
    g.challenges.emplace_back();
    return id;
  };

  std::uint32_t init = intern({lhs.initial, rhs.initial});
  for (std::uint32_t id = 0; id < g.pairs.size(); ++id) {
    PairKey k = g.pairs[id];
    std::vector<Challenge> cs;
    for (const auto& e : lhs.adj[k.left]) {
      Challenge c{1, &e, obs_cost(e.action, e.cost), {}};
      for (const auto& [end, cost] : right_oracle.responses(k.right, e.action)) {
        std::int64_t delta = static_cast<std::int64_t>(cost) -
                             static_cast<std::int64_t>(c.charged_cost);
        c.responses.emplace_back(intern({e.dst, end}), delta);
      }
      cs.push_back(std::move(c));
    }
    for (const auto& e : rhs.adj[k.right]) {
      // Right-side spending credits the left side in full, internal or not.
      Challenge c{2, &e, e.cost, {}};
      for (const auto& [end, cost] : left_oracle.responses(k.left, e.action)) {
        std::int64_t delta = static_cast<std::int64_t>(c.charged_cost) -
                             static_cast<std::int64_t>(cost);
        c.responses.emplace_back(intern({end, e.dst}), delta);
      }
      cs.push_back(std::move(c));
    }
    g.challenges[id] = std::move(cs);
  }

  // Minimal surviving credit per pair, by value iteration from zero.  The
  // needed credit of a challenge is the best over responses of
  // max(0, m(next) - delta); a challenge with no response at all is lost at
  // any credit.  Values above the cap collapse to cap+1.
  const std::uint64_t sentinel = credit_cap + 1;
  std::vector<std::uint64_t> m(g.pairs.size(), 0);

  auto required = [&](const Challenge& c) -> std::uint64_t {
    if (c.responses.empty()) return kInf;
    std::uint64_t best = kInf;
    for (const auto& [next, delta] : c.responses) {
      std::uint64_t need;
      if (m[next] == kInf) {
        need = kInf;
      } else {
        std::int64_t v = static_cast<std::int64_t>(m[next]) - delta;
        if (v <= 0) {
          need = 0;
        } else if (static_cast<std::uint64_t>(v) > credit_cap) {
          need = sentinel;
        } else {
          need = static_cast<std::uint64_t>(v);
        }
      }
      best = std::min(best, need);
    }
    return best;
  };

  const std::uint64_t max_sweeps = 10'000 + g.pairs.size() * 4;
  bool changed = true;
  std::uint64_t sweeps = 0;
  while (changed) {
    if (++sweeps > max_sweeps) {
      throw ResourceLimit("credit value iteration sweeps", max_sweeps);
    }
    changed = false;
    for (std::uint32_t id = 0; id < g.pairs.size(); ++id) {
      std::uint64_t v = 0;
      for (const auto& c : g.challenges[id]) {
        std::uint64_t need = required(c);
        v = std::max(v, need);
        if (v == kInf) break;
      }
      if (v != kInf && v > credit_cap) v = sentinel;
      if (v > m[id]) {
        m[id] = v;
        changed = true;
      }
    }
  }

  AmortisedVerdict verdict;
  verdict.pairs_explored = g.pairs.size();
  std::uint64_t m0 = m[init];
  if (m0 == 0) {
    verdict.result = AmortisedResult::more_efficient;
    verdict.min_credit = 0;
    return verdict;
  }
  if (m0 == sentinel) {
    verdict.result = AmortisedResult::inconclusive;
    verdict.bound = credit_cap;
    return verdict;
  }

  verdict.result = AmortisedResult::not_more_efficient;
  verdict.min_credit = (m0 == kInf) ? credit_cap : m0;

  // Challenger strategy from credit 0: repeatedly pick a challenge whose
  // needed credit exceeds what the defender holds; the defender's best
  // response keeps losing ground until no legal reply remains.
  std::uint32_t pair = init;
  std::int64_t credit = 0;
  std::uint64_t guard = 10 * g.pairs.size() + 100;
  while (guard-- > 0) {
    const Challenge* pick = nullptr;
    std::uint64_t pick_need = 0;
    for (const auto& c : g.challenges[pair]) {
      std::uint64_t need = required(c);
      if (need == kInf || (need != kInf && need > pick_need &&
                           need > static_cast<std::uint64_t>(credit))) {
        pick = &c;
        pick_need = need;
        if (need == kInf) break;
      }
    }
    if (!pick) break;  // should not happen while credit < m[pair]

    AmortisedStep step;
    step.side = pick->side;
    step.challenge = pick->edge->action;
    step.challenge_cost = pick->edge->cost;
    step.credit_before = credit;

    // Defender's best legal reply: survive if possible, else maximise the
    // margin it keeps.
    const std::pair<std::uint32_t, std::int64_t>* best = nullptr;
    std::int64_t best_margin = std::numeric_limits<std::int64_t>::min();
    for (const auto& r : pick->responses) {
      std::int64_t after = credit + r.second;
      if (after < 0) continue;
      std::int64_t mn = m[r.first] == kInf
                            ? std::numeric_limits<std::int64_t>::max() / 2
                            : static_cast<std::int64_t>(m[r.first]);
      std::int64_t margin = after - mn;
      if (margin > best_margin) {
        best_margin = margin;
        best = &r;
      }
    }
    if (!best) {
      step.credit_after = credit;
      verdict.witness.push_back(std::move(step));
      break;  // no reply keeps the credit nonnegative (or none exists)
    }

    // Materialise the reply for the report.
    ClosureOracle& oracle = pick->side == 1 ? right_oracle : left_oracle;
    StateId resp_from = pick->side == 1 ? g.pairs[pair].right : g.pairs[pair].left;
    auto paths = oracle.response_paths(resp_from, pick->edge->action);
    StateId resp_end =
        pick->side == 1 ? g.pairs[best->first].right : g.pairs[best->first].left;
    auto pit = paths.find(resp_end);
    if (pit != paths.end()) step.response = pit->second;

    credit += best->second;
    step.credit_after = credit;
    verdict.witness.push_back(std::move(step));
    pair = best->first;
    if (static_cast<std::uint64_t>(credit) >= m[pair] && m[pair] != kInf) {
      break;  // defender escaped; witness incomplete (not expected)
    }
  }
  return verdict;
}

}  // namespace morphsim
