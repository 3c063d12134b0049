#include "morphsim/impl_semantics.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace morphsim {

namespace {

// Applies one system action to the caches/store.  Used both for spontaneous
// system transitions and for replaying a release fence.
void apply_system_action(ImplState& s, const Action& a) {
  auto cache_idx = static_cast<std::size_t>(a.actor);
  switch (a.kind) {
    case ActionKind::evict:
      s.caches[cache_idx].erase(a.var);
      break;
    case ActionKind::cache_update: {
      const CacheEntry& src = s.caches[cache_idx].at(a.var);
      s.caches[static_cast<std::size_t>(a.target)][a.var] =
          CacheEntry{src.value, false};
      break;
    }
    case ActionKind::store_update: {
      CacheEntry& e = s.caches[cache_idx].at(a.var);
      s.store[a.var] = e.value;
      e.dirty = false;
      break;
    }
    default:
      break;
  }
}

}  // namespace

std::map<std::string, std::int64_t> reduct_store(const ImplState& s) {
  std::map<std::string, std::int64_t> out = s.store;
  std::map<std::string, std::int64_t> dirty_value;
  for (const auto& cache : s.caches) {
    for (const auto& [var, entry] : cache) {
      if (!entry.dirty) continue;
      auto it = dirty_value.find(var);
      if (it == dirty_value.end()) {
        dirty_value[var] = entry.value;
      } else if (it->second != entry.value) {
        throw IncoherentError(var);
      }
    }
  }
  for (const auto& [var, val] : dirty_value) out[var] = val;
  return out;
}

bool state_is_coherent(const ImplState& s) {
  std::map<std::string, std::int64_t> dirty_value;
  for (const auto& cache : s.caches) {
    for (const auto& [var, entry] : cache) {
      if (!entry.dirty) continue;
      auto it = dirty_value.find(var);
      if (it == dirty_value.end()) {
        dirty_value[var] = entry.value;
      } else if (it->second != entry.value) {
        return false;
      }
    }
  }
  return true;
}

std::pair<Action, ImplState> apply_reconf(const ImplState& s,
                                          const Clustering& q_new) {
  ImplState next = s;
  next.store = reduct_store(s);  // throws IncoherentError if not unique
  next.caches.assign(q_new.cluster_count(), Cache{});
  next.clustering = q_new;
  Action a = make_reconf(s.clustering.to_string(), q_new.to_string());
  return {std::move(a), std::move(next)};
}

ImplMachine::ImplMachine(const Workload& w, Clustering q, ImplExploreOptions opt)
    : workload_(&w), initial_clustering_(std::move(q)), opt_(std::move(opt)) {
  if (initial_clustering_.num_cores != w.num_cores) {
    throw std::invalid_argument("clustering core count does not match workload");
  }
  for (const auto& ev : opt_.events) {
    if (ev.target.num_cores != w.num_cores) {
      throw std::invalid_argument("reconf target core count does not match workload");
    }
  }
  for (const auto& t : opt_.anywhere_targets) {
    if (t.num_cores != w.num_cores) {
      throw std::invalid_argument("reconf target core count does not match workload");
    }
  }
}

ImplState ImplMachine::initial_state() const {
  ImplState s;
  s.store = workload_->init_store;
  s.caches.assign(initial_clustering_.cluster_count(), Cache{});
  s.clustering = initial_clustering_;
  s.pcs.assign(workload_->num_cores, 0);
  for (const auto& l : workload_->locks) s.locks[l] = -1;
  return s;
}

std::vector<std::pair<Action, ImplState>> ImplMachine::program_successors(
    const ImplState& s) const {
  std::vector<std::pair<Action, ImplState>> out;
  if (!s.fence.empty()) return out;

  for (std::uint32_t i = 0; i < workload_->num_cores; ++i) {
    const auto& prog = workload_->threads[i].instructions;
    if (s.pcs[i] >= prog.size()) continue;
    const Instruction& ins = prog[s.pcs[i]];
    std::uint32_t cl = s.clustering.cluster_of[i];
    const Cache& cache = s.caches[cl];
    auto thread = static_cast<std::int32_t>(i);

    switch (ins.op) {
      case Instruction::Op::read: {
        auto hit = cache.find(ins.var);
        if (hit != cache.end()) {
          ImplState next = s;
          next.pcs[i]++;
          out.emplace_back(make_local_read(ins.var, hit->second.value, thread),
                           std::move(next));
        } else {
          // Whether the value is pulled into the cache is the
          // cache-replacement policy's business; both outcomes are explored.
          std::int64_t v = s.store.at(ins.var);
          ImplState bypass = s;
          bypass.pcs[i]++;
          out.emplace_back(make_store_read(ins.var, v, thread), std::move(bypass));
          ImplState pull = s;
          pull.caches[cl][ins.var] = CacheEntry{v, false};
          pull.pcs[i]++;
          out.emplace_back(make_pull_read(ins.var, v, thread), std::move(pull));
        }
        break;
      }
      case Instruction::Op::write: {
        ImplState next = s;
        next.caches[cl][ins.var] = CacheEntry{ins.value, true};
        next.pcs[i]++;
        out.emplace_back(make_local_write(ins.var, ins.value, thread),
                         std::move(next));
        break;
      }
      case Instruction::Op::compute: {
        ImplState next = s;
        next.pcs[i]++;
        out.emplace_back(make_tau(thread), std::move(next));
        break;
      }
      case Instruction::Op::lock: {
        if (s.locks.at(ins.var) != -1) break;
        ImplState next = s;
        next.locks[ins.var] = thread;
        next.pcs[i]++;
        out.emplace_back(make_lock_acquire(ins.var, thread), std::move(next));
        break;
      }
      case Instruction::Op::unlock: {
        if (s.locks.at(ins.var) != thread) break;
        // Release fence: push every dirty entry of the releasing cluster to
        // the caches that hold the variable, commit it, then release.
        std::vector<Action> chain;
        for (const auto& [var, entry] : cache) {
          if (!entry.dirty) continue;
          for (std::uint32_t j = 0; j < s.caches.size(); ++j) {
            if (j == cl) continue;
            auto other = s.caches[j].find(var);
            if (other != s.caches[j].end() &&
                !(other->second == CacheEntry{entry.value, false})) {
              chain.push_back(make_cache_update(static_cast<std::int32_t>(cl),
                                                static_cast<std::int32_t>(j), var));
            }
          }
          chain.push_back(make_store_update(static_cast<std::int32_t>(cl), var));
        }
        chain.push_back(make_lock_release(ins.var, thread));

        ImplState next = s;
        Action first = chain.front();
        next.fence.assign(chain.begin() + 1, chain.end());
        if (first.kind == ActionKind::lock_release) {
          next.locks[ins.var] = -1;
          next.pcs[i]++;
          next.fence.clear();
        } else {
          apply_system_action(next, first);
        }
        out.emplace_back(std::move(first), std::move(next));
        break;
      }
    }
  }
  return out;
}

std::vector<std::pair<Action, ImplState>> ImplMachine::system_successors(
    const ImplState& s) const {
  if (!s.fence.empty()) return {};
  return impl_system_successors(s);
}

std::vector<std::pair<Action, ImplState>> impl_system_successors(const ImplState& s) {
  std::vector<std::pair<Action, ImplState>> out;
  for (std::uint32_t i = 0; i < s.caches.size(); ++i) {
    for (const auto& [var, entry] : s.caches[i]) {
      auto src = static_cast<std::int32_t>(i);
      if (!entry.dirty) {
        // Eviction applies to clean entries only; no data is ever lost.
        ImplState next = s;
        next.caches[i].erase(var);
        out.emplace_back(make_evict(src, var), std::move(next));
        continue;
      }
      // Cache updates push the dirty value to any other cache holding the
      // variable with different contents.
      for (std::uint32_t j = 0; j < s.caches.size(); ++j) {
        if (j == i) continue;
        auto other = s.caches[j].find(var);
        if (other == s.caches[j].end()) continue;
        if (other->second == CacheEntry{entry.value, false}) continue;
        ImplState next = s;
        next.caches[j][var] = CacheEntry{entry.value, false};
        out.emplace_back(
            make_cache_update(src, static_cast<std::int32_t>(j), var),
            std::move(next));
      }
      // The store commit waits until every other holder agrees clean.
      bool all_agree = true;
      for (std::uint32_t j = 0; j < s.caches.size() && all_agree; ++j) {
        if (j == i) continue;
        auto other = s.caches[j].find(var);
        if (other != s.caches[j].end() &&
            !(other->second == CacheEntry{entry.value, false})) {
          all_agree = false;
        }
      }
      if (all_agree) {
        ImplState next = s;
        next.store[var] = entry.value;
        next.caches[i][var] = CacheEntry{entry.value, false};
        out.emplace_back(make_store_update(src, var), std::move(next));
      }
    }
  }
  return out;
}

std::vector<std::pair<Action, ImplState>> ImplMachine::reconf_successors(
    const ImplState& s, std::uint64_t depth) const {
  std::vector<std::pair<Action, ImplState>> out;
  if (!s.fence.empty()) return out;

  std::vector<const Clustering*> targets;
  for (const auto& ev : opt_.events) {
    if (ev.at_step == depth) targets.push_back(&ev.target);
  }
  if (opt_.reconf_anywhere) {
    for (const auto& t : opt_.anywhere_targets) targets.push_back(&t);
  }
  if (targets.empty()) return out;

  if (!state_is_coherent(s)) {
    ++reconf_skipped_;
    return out;
  }
  std::set<std::string> emitted;
  for (const Clustering* t : targets) {
    if (*t == s.clustering) continue;
    if (!emitted.insert(t->to_string()).second) continue;
    out.push_back(apply_reconf(s, *t));
  }
  return out;
}

std::vector<std::pair<Action, ImplState>> ImplMachine::successors(
    const ImplState& s, std::uint64_t depth) const {
  if (!s.fence.empty()) {
    // Mid-release: the rest of the flush is the only enabled move.
    ImplState next = s;
    Action head = next.fence.front();
    next.fence.erase(next.fence.begin());
    if (head.kind == ActionKind::lock_release) {
      next.locks[head.var] = -1;
      next.pcs[static_cast<std::size_t>(head.actor)]++;
    } else {
      apply_system_action(next, head);
    }
    std::vector<std::pair<Action, ImplState>> out;
    out.emplace_back(std::move(head), std::move(next));
    return out;
  }
  auto out = program_successors(s);
  auto sys = system_successors(s);
  std::move(sys.begin(), sys.end(), std::back_inserter(out));
  auto rec = reconf_successors(s, depth);
  std::move(rec.begin(), rec.end(), std::back_inserter(out));
  return out;
}

bool ImplMachine::completed(const ImplState& s) const {
  if (!s.fence.empty()) return false;
  return program_successors(s).empty();
}

std::string ImplMachine::label(const ImplState& s) const {
  std::ostringstream out;
  out << "S{";
  bool first = true;
  for (const auto& [var, val] : s.store) {
    if (!first) out << " ";
    first = false;
    out << var << "=" << val;
  }
  out << "}";
  for (std::size_t c = 0; c < s.caches.size(); ++c) {
    out << " C" << c << "{";
    first = true;
    for (const auto& [var, entry] : s.caches[c]) {
      if (!first) out << " ";
      first = false;
      out << var << "=" << entry.value << (entry.dirty ? "d" : "c");
    }
    out << "}";
  }
  out << " Q=" << s.clustering.to_string() << " pc{";
  for (std::size_t i = 0; i < s.pcs.size(); ++i) {
    if (i) out << " ";
    out << s.pcs[i];
  }
  out << "} L{";
  first = true;
  for (const auto& [l, holder] : s.locks) {
    if (!first) out << " ";
    first = false;
    out << l << "=" << holder;
  }
  out << "}";
  if (!s.fence.empty()) {
    out << " F[";
    for (std::size_t k = 0; k < s.fence.size(); ++k) {
      if (k) out << ";";
      out << s.fence[k].to_text();
    }
    out << "]";
  }
  return out.str();
}

SystemClosure system_only_closure(const ImplState& s, std::uint64_t state_cap) {
  SystemClosure out;
  std::set<ImplState> seen{s};
  std::deque<ImplState> queue{s};
  std::map<ImplState, std::vector<ImplState>> graph;

  while (!queue.empty()) {
    ImplState cur = queue.front();
    queue.pop_front();
    auto succs = impl_system_successors(cur);
    if (succs.empty()) out.normal_forms.push_back(cur);
    auto& nexts = graph[cur];
    for (auto& [a, next] : succs) {
      (void)a;
      nexts.push_back(next);
      if (seen.count(next)) continue;
      if (seen.size() >= state_cap) {
        throw ResourceLimit("system closure states", state_cap);
      }
      seen.insert(next);
      queue.push_back(std::move(next));
    }
  }
  out.states_visited = seen.size();

  // Cycle check by sink peeling: acyclic iff everything peels.
  std::map<const ImplState*, std::size_t> outdeg;
  std::map<const ImplState*, std::vector<const ImplState*>> preds;
  auto node = [&](const ImplState& st) { return &*seen.find(st); };
  for (const ImplState& st : seen) {
    const ImplState* id = &st;
    outdeg[id] = graph[st].size();
    for (const ImplState& nx : graph[st]) preds[node(nx)].push_back(id);
  }
  std::deque<const ImplState*> zero;
  for (const auto& [id, d] : outdeg) {
    if (d == 0) zero.push_back(id);
  }
  std::size_t peeled = 0;
  while (!zero.empty()) {
    const ImplState* cur = zero.front();
    zero.pop_front();
    ++peeled;
    for (const ImplState* p : preds[cur]) {
      if (--outdeg[p] == 0) zero.push_back(p);
    }
  }
  out.has_cycle = peeled != seen.size();
  return out;
}

ImplLts explore_impl(const Workload& w, const Clustering& q,
                     const ImplExploreOptions& opt) {
  ImplMachine machine(w, q, opt);
  auto r = explore(machine, opt.depth, opt.state_cap);
  ImplLts lts{std::move(r.core), std::move(r.states)};
  lts.core.reconf_skipped = machine.reconf_skipped();
  return lts;
}

}  // namespace morphsim
