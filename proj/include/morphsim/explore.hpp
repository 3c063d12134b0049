#ifndef MORPHSIM_EXPLORE_HPP_
#define MORPHSIM_EXPLORE_HPP_

#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "morphsim/action.hpp"
#include "morphsim/errors.hpp"

namespace morphsim {

using StateId = std::uint32_t;

struct LtsEdge {
  Action action;
  std::uint64_t cost = 0;
  StateId dst = 0;
};

// Machine-agnostic view of an explored transition system.  State identity is
// structural; ids are assigned in breadth-first discovery order, so two runs
// over the same input produce identical cores.
struct LtsCore {
  StateId initial = 0;
  std::vector<std::vector<LtsEdge>> adj;
  std::vector<bool> completed;  // no program transition enabled
  std::vector<std::string> labels;
  std::vector<std::uint64_t> hashes;
  std::uint64_t reconf_skipped = 0;  // reconf points skipped as incoherent

  std::size_t num_states() const { return adj.size(); }
  std::size_t num_edges() const {
    std::size_t n = 0;
    for (const auto& out : adj) n += out.size();
    return n;
  }
};

std::uint64_t fnv1a64(const std::string& data);

// Text export: `initial`, a state table, then one `<hash> <action> <cost>
// <hash>` line per edge, all in id order.
std::string export_lts_text(const LtsCore& lts);

// Machine concept:
//   using State;                       ordered value type
//   State initial_state() const;
//   std::vector<std::pair<Action, State>> successors(const State&,
//                                                    std::uint64_t depth) const;
//   bool completed(const State&) const;
//   std::string label(const State&) const;
//   std::uint64_t edge_cost(const Action&) const;
template <typename Machine>
struct ExploreResult {
  LtsCore core;
  std::vector<typename Machine::State> states;
};

template <typename Machine>
ExploreResult<Machine> explore(const Machine& machine, std::uint64_t depth,
                               std::uint64_t state_cap) {
  ExploreResult<Machine> result;
  std::map<typename Machine::State, StateId> ids;

  auto intern = [&](typename Machine::State&& s) -> std::pair<StateId, bool> {
    auto it = ids.find(s);
    if (it != ids.end()) return {it->second, false};
    if (result.states.size() >= state_cap) {
      throw ResourceLimit("states", state_cap);
    }
    StateId id = static_cast<StateId>(result.states.size());
    ids.emplace(s, id);
    result.core.labels.push_back(machine.label(s));
    result.core.hashes.push_back(fnv1a64(result.core.labels.back()));
    result.core.completed.push_back(machine.completed(s));
    result.core.adj.emplace_back();
    result.states.push_back(std::move(s));
    return {id, true};
  };

  auto [init_id, fresh] = intern(machine.initial_state());
  (void)fresh;
  result.core.initial = init_id;

  std::deque<std::pair<StateId, std::uint64_t>> frontier;
  frontier.emplace_back(init_id, 0);

  while (!frontier.empty()) {
    auto [id, level] = frontier.front();
    frontier.pop_front();
    if (level >= depth) continue;
    auto succs = machine.successors(result.states[id], level);
    for (auto& [action, next] : succs) {
      std::uint64_t cost = machine.edge_cost(action);
      auto [next_id, added] = intern(std::move(next));
      result.core.adj[id].push_back({std::move(action), cost, next_id});
      if (added) frontier.emplace_back(next_id, level + 1);
    }
  }
  return result;
}

}  // namespace morphsim

#endif  // MORPHSIM_EXPLORE_HPP_
