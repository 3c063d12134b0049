#ifndef MORPHSIM_IMPL_SEMANTICS_HPP_
#define MORPHSIM_IMPL_SEMANTICS_HPP_

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "morphsim/clustering.hpp"
#include "morphsim/cost_model.hpp"
#include "morphsim/explore.hpp"
#include "morphsim/ref_semantics.hpp"
#include "morphsim/workload.hpp"

namespace morphsim {

struct CacheEntry {
  std::int64_t value = 0;
  bool dirty = false;

  auto operator<=>(const CacheEntry&) const = default;
};

using Cache = std::map<std::string, CacheEntry>;

// Clustered-cache machine state.  Caches are indexed by cluster id, so cores
// in one cluster alias one cache by construction.  Only data variables are
// ever cached; locks act on the lock store directly.
//
// `fence` holds the forced remainder of an unlock in progress: the releasing
// cluster's dirty entries are pushed to the other caches holding them, then
// committed to the store, and only then does the release itself fire.  While
// the fence is non-empty its head is the only enabled transition.
struct ImplState {
  std::map<std::string, std::int64_t> store;
  std::vector<Cache> caches;  // one per cluster
  Clustering clustering;
  std::vector<std::uint32_t> pcs;
  std::map<std::string, std::int32_t> locks;
  std::vector<Action> fence;

  auto operator<=>(const ImplState&) const = default;

  const Cache& cache_of_core(std::uint32_t core) const {
    return caches[clustering.cluster_of[core]];
  }
};

// When to interleave a reconfiguration during exploration.
struct ReconfEvent {
  std::uint64_t at_step = 0;  // breadth-first depth of the trigger states
  Clustering target;
};

// Closed form of the store a coherent state commits to: the agreed dirty
// value of each variable where one exists, the current store value
// otherwise.  Throws IncoherentError when dirty copies disagree.
std::map<std::string, std::int64_t> reduct_store(const ImplState& s);

// True iff every variable's dirty cached copies agree on one value.
bool state_is_coherent(const ImplState& s);

// The reconfiguration step: commits the reduct store, empties all caches,
// and installs the new clustering; threads and locks carry over.  Requires
// coherence (the reduct is not unique otherwise).
std::pair<Action, ImplState> apply_reconf(const ImplState& s,
                                          const Clustering& q_new);

struct ImplExploreOptions {
  std::uint64_t depth = 1u << 20;
  std::uint64_t state_cap = 1'000'000;
  CostParams costs{};
  std::vector<ReconfEvent> events;
  bool reconf_anywhere = false;
  std::vector<Clustering> anywhere_targets;
};

struct ImplMachine {
  using State = ImplState;

  ImplMachine(const Workload& w, Clustering q, ImplExploreOptions opt = {});

  State initial_state() const;
  std::vector<std::pair<Action, State>> successors(const State& s,
                                                   std::uint64_t depth) const;
  bool completed(const State& s) const;
  std::string label(const State& s) const;
  std::uint64_t edge_cost(const Action& a) const {
    return action_cost(a, opt_.costs);
  }

  std::uint64_t reconf_skipped() const { return reconf_skipped_; }

  // Program transitions only (cache read/write rules, tau, locks).
  std::vector<std::pair<Action, State>> program_successors(const State& s) const;
  // Update-protocol transitions only (evict / cache update / store update).
  std::vector<std::pair<Action, State>> system_successors(const State& s) const;

 private:
  std::vector<std::pair<Action, State>> reconf_successors(
      const State& s, std::uint64_t depth) const;

  const Workload* workload_;
  Clustering initial_clustering_;
  ImplExploreOptions opt_;
  mutable std::uint64_t reconf_skipped_ = 0;
};

struct ImplLts {
  LtsCore core;
  std::vector<ImplState> states;
};

// Breadth-first closure over program, system and (where configured)
// reconfiguration transitions, from the cold-cache initial state.
ImplLts explore_impl(const Workload& w, const Clustering& q,
                     const ImplExploreOptions& opt = {});

// System transitions enabled at s, without building a machine.
std::vector<std::pair<Action, ImplState>> impl_system_successors(const ImplState& s);

// Exhaustive closure under system transitions alone, with cycle detection.
// From a coherent state this terminates in exactly one normal form with
// empty caches; incoherent states can yield several normal forms and may
// admit update cycles.
struct SystemClosure {
  std::vector<ImplState> normal_forms;  // deduplicated, discovery order
  bool has_cycle = false;
  std::uint64_t states_visited = 0;
};

SystemClosure system_only_closure(const ImplState& s,
                                  std::uint64_t state_cap = 100'000);

}  // namespace morphsim

#endif  // MORPHSIM_IMPL_SEMANTICS_HPP_
