#ifndef MORPHSIM_REF_SEMANTICS_HPP_
#define MORPHSIM_REF_SEMANTICS_HPP_

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "morphsim/cost_model.hpp"
#include "morphsim/explore.hpp"
#include "morphsim/workload.hpp"

namespace morphsim {

// Sequentially consistent machine state: a single shared store, the per-core
// program counters, and the lock store.  Programs are fixed, so they live in
// the Workload, not here.
struct RefState {
  std::map<std::string, std::int64_t> store;
  std::vector<std::uint32_t> pcs;
  std::map<std::string, std::int32_t> locks;  // -1 = free, else holder core

  auto operator<=>(const RefState&) const = default;
};

struct RefMachine {
  using State = RefState;

  explicit RefMachine(const Workload& w, CostParams params = {})
      : workload_(&w), params_(params) {}

  State initial_state() const;
  std::vector<std::pair<Action, State>> successors(const State& s,
                                                   std::uint64_t depth) const;
  bool completed(const State& s) const;
  std::string label(const State& s) const;
  std::uint64_t edge_cost(const Action& a) const {
    return action_cost(a, params_);
  }

  const Workload& workload() const { return *workload_; }

 private:
  const Workload* workload_;
  CostParams params_;
};

struct RefLts {
  LtsCore core;
  std::vector<RefState> states;
};

struct ExploreOptions {
  std::uint64_t depth = 1u << 20;
  std::uint64_t state_cap = 1'000'000;
  CostParams costs{};
};

// Breadth-first closure of the reference transitions, depth-bounded,
// deterministic (threads visited in ascending index order).
RefLts explore_ref(const Workload& w, const ExploreOptions& opt = {});

enum class AccessKind { read, write };

// Two distinct threads whose next instructions touch the same data variable,
// at least one writing.
struct RaceWitness {
  std::uint32_t thread_a = 0;
  std::uint32_t thread_b = 0;
  std::string var;
  AccessKind kind_a = AccessKind::read;
  AccessKind kind_b = AccessKind::read;

  auto operator<=>(const RaceWitness&) const = default;
};

// Lock/unlock never race: lock variables live outside the data namespace.
std::optional<RaceWitness> is_racy_state(const Workload& w, const RefState& s);

// All racy states reachable within `depth`, each with its first witness in
// canonical (thread-ascending) order.  Empty iff the workload is race-free
// up to that depth; exploration covers every reachable state for
// straight-line programs when depth >= total instruction count.
std::vector<std::pair<RefState, RaceWitness>> detect_races(
    const Workload& w, const ExploreOptions& opt = {});

}  // namespace morphsim

#endif  // MORPHSIM_REF_SEMANTICS_HPP_
