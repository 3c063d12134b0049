#include "morphsim/analysis.hpp"

#include <algorithm>
#include <deque>
#include <tuple>

namespace morphsim {

ActionClass class_of(const Action& a, const ObsConfig& cfg) {
  switch (a.kind) {
    case ActionKind::ref_read:
    case ActionKind::local_read:
    case ActionKind::store_read:
    case ActionKind::pull_read:
      return ActionClass::read;
    case ActionKind::ref_write:
    case ActionKind::local_write:
      return ActionClass::write;
    case ActionKind::lock_acquire:
      return cfg.locks_observable ? ActionClass::lock_acquire
                                  : ActionClass::internal;
    case ActionKind::lock_release:
      return cfg.locks_observable ? ActionClass::lock_release
                                  : ActionClass::internal;
    case ActionKind::tau:
    case ActionKind::evict:
    case ActionKind::cache_update:
    case ActionKind::store_update:
    case ActionKind::reconf:
      return ActionClass::internal;
  }
  return ActionClass::internal;
}

bool is_observable(const Action& a, const ObsConfig& cfg) {
  return class_of(a, cfg) != ActionClass::internal;
}

bool functionally_equivalent(const Action& a, const Action& b,
                             const ObsConfig& cfg) {
  ActionClass ca = class_of(a, cfg);
  if (ca != class_of(b, cfg)) return false;
  switch (ca) {
    case ActionClass::read:
    case ActionClass::write:
      return a.var == b.var && a.value == b.value && a.actor == b.actor;
    case ActionClass::lock_acquire:
    case ActionClass::lock_release:
      return a.var == b.var && a.actor == b.actor;
    case ActionClass::internal:
      return true;
  }
  return false;
}

std::vector<Action> observable_projection(const Trace& t, const ObsConfig& cfg) {
  std::vector<Action> out;
  for (const auto& step : t) {
    if (is_observable(step.action, cfg)) out.push_back(step.action);
  }
  return out;
}

ObsKey obs_key(const Action& a, const ObsConfig& cfg) {
  ObsKey k;
  switch (class_of(a, cfg)) {
    case ActionClass::read:
      k.rank = 0;
      k.var = a.var;
      k.value = a.value;
      k.thread = a.actor;
      break;
    case ActionClass::write:
      k.rank = 1;
      k.var = a.var;
      k.value = a.value;
      k.thread = a.actor;
      break;
    case ActionClass::lock_acquire:
      k.rank = 2;
      k.var = a.var;
      k.thread = a.actor;
      break;
    case ActionClass::lock_release:
      k.rank = 3;
      k.var = a.var;
      k.thread = a.actor;
      break;
    case ActionClass::internal:
      k.rank = 255;
      break;
  }
  return k;
}

namespace {

// Internal-closure of one state: every state reachable through unobservable
// edges, with the concrete path that first reached it (breadth-first, so the
// path is one of the shortest).  Cycles are fine; the visited set cuts them.
struct Closure {
  std::vector<StateId> order;
  std::map<StateId, Trace> path;
};

Closure internal_closure(const LtsCore& lts, StateId start, const ObsConfig& cfg) {
  Closure c;
  std::deque<StateId> queue;
  c.path[start] = {};
  c.order.push_back(start);
  queue.push_back(start);
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    for (const auto& e : lts.adj[s]) {
      if (is_observable(e.action, cfg)) continue;
      if (c.path.count(e.dst)) continue;
      Trace p = c.path[s];
      p.push_back({e.action, e.cost});
      c.path[e.dst] = std::move(p);
      c.order.push_back(e.dst);
      queue.push_back(e.dst);
    }
  }
  return c;
}

struct LanguageBuilder {
  const LtsCore& lts;
  const ObsConfig& cfg;
  std::uint64_t trace_cap;
  // Suffix language per state.  Observable steps strictly advance the
  // programs, so the recursion bottoms out.
  std::map<StateId, TraceLanguage> memo;
  std::uint64_t total = 0;

  const TraceLanguage& language_of(StateId s) {
    auto it = memo.find(s);
    if (it != memo.end()) return it->second;

    TraceLanguage lang;
    Closure closure = internal_closure(lts, s, cfg);
    for (StateId t : closure.order) {
      if (lts.completed[t]) {
        ObsTrace empty;
        if (lang.traces.insert(empty).second) {
          ++total;
          if (total > trace_cap) throw ResourceLimit("traces", trace_cap);
          lang.representatives[empty] = closure.path[t];
        }
      }
      for (const auto& e : lts.adj[t]) {
        if (!is_observable(e.action, cfg)) continue;
        ObsKey key = obs_key(e.action, cfg);
        const TraceLanguage& suffix = language_of(e.dst);
        for (const auto& tail : suffix.traces) {
          ObsTrace full;
          full.reserve(tail.size() + 1);
          full.push_back(key);
          full.insert(full.end(), tail.begin(), tail.end());
          if (lang.traces.insert(full).second) {
            ++total;
            if (total > trace_cap) throw ResourceLimit("traces", trace_cap);
            Trace rep = closure.path[t];
            rep.push_back({e.action, e.cost});
            const Trace& tail_rep = suffix.representatives.at(tail);
            rep.insert(rep.end(), tail_rep.begin(), tail_rep.end());
            lang.representatives[full] = std::move(rep);
          }
        }
      }
    }
    return memo.emplace(s, std::move(lang)).first->second;
  }
};

}  // namespace

TraceLanguage obs_trace_language(const LtsCore& lts, const ObsConfig& cfg,
                                 std::uint64_t trace_cap) {
  LanguageBuilder builder{lts, cfg, trace_cap, {}, 0};
  return builder.language_of(lts.initial);
}

ConformanceVerdict check_conformance(const LtsCore& subject,
                                     const LtsCore& reference,
                                     const ObsConfig& cfg,
                                     std::uint64_t trace_cap) {
  TraceLanguage subj = obs_trace_language(subject, cfg, trace_cap);
  TraceLanguage ref = obs_trace_language(reference, cfg, trace_cap);
  ConformanceVerdict v;
  v.checked_traces = subj.traces.size();
  for (const auto& t : subj.traces) {  // std::set: ascending, so the first
    if (!ref.traces.count(t)) {        // miss is the least counterexample
      v.conforms = false;
      v.counterexample = subj.representatives.at(t);
      break;
    }
  }
  return v;
}

std::int64_t view(const ImplState& s, std::uint32_t core, const std::string& var) {
  if (core >= s.clustering.num_cores) {
    throw std::out_of_range("core id out of range");
  }
  const Cache& cache = s.cache_of_core(core);
  auto it = cache.find(var);
  if (it != cache.end()) return it->second.value;
  auto sv = s.store.find(var);
  if (sv == s.store.end()) throw std::out_of_range("unknown variable '" + var + "'");
  return sv->second;
}

bool is_coherent(const ImplState& s) { return state_is_coherent(s); }

CoherenceReport coherence_report(const ImplState& s) {
  CoherenceReport r;
  std::map<std::string, std::vector<std::pair<std::uint32_t, std::int64_t>>> dirty;
  for (std::uint32_t c = 0; c < s.caches.size(); ++c) {
    for (const auto& [var, entry] : s.caches[c]) {
      if (entry.dirty) dirty[var].emplace_back(c, entry.value);
    }
  }
  for (auto& [var, copies] : dirty) {
    bool agree = std::all_of(copies.begin(), copies.end(), [&](const auto& p) {
      return p.second == copies.front().second;
    });
    if (!agree) {
      r.ok = false;
      r.violations[var] = copies;
    }
  }
  return r;
}

bool is_consistent(const ImplState& s) {
  for (const auto& cache : s.caches) {
    for (const auto& [var, entry] : cache) {
      if (entry.dirty || entry.value != s.store.at(var)) return false;
    }
  }
  return true;
}

ConsistencyReport consistency_report(const ImplState& s) {
  ConsistencyReport r;
  for (std::uint32_t c = 0; c < s.caches.size(); ++c) {
    for (const auto& [var, entry] : s.caches[c]) {
      if (entry.dirty || entry.value != s.store.at(var)) {
        r.ok = false;
        r.violations[var].emplace_back(c, entry.value, entry.dirty);
      }
    }
  }
  return r;
}

RefState reduct(const ImplState& s) {
  RefState r;
  r.store = reduct_store(s);  // throws IncoherentError when not unique
  r.pcs = s.pcs;
  r.locks = s.locks;
  return r;
}

DrfResult is_drf(const Workload& w, const Clustering& q_start,
                 const ExploreOptions& opt) {
  if (q_start.num_cores != w.num_cores) {
    throw std::invalid_argument("clustering core count does not match workload");
  }
  RefLts lts = explore_ref(w, opt);
  DrfResult result;
  result.states_explored = lts.states.size();
  for (const auto& s : lts.states) {
    if (auto wit = is_racy_state(w, s)) {
      result.drf = false;
      result.witness = *wit;
      return result;
    }
  }
  return result;
}

}  // namespace morphsim
