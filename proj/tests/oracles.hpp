// Test-only oracles: small, independent re-implementations used to check
// the library's answers.  They share no exploration machinery with the code
// under test; everything here is plain recursion over the rule definitions.
#ifndef MORPHSIM_TESTS_ORACLES_HPP_
#define MORPHSIM_TESTS_ORACLES_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "morphsim/amortised.hpp"
#include "morphsim/analysis.hpp"
#include "morphsim/explore.hpp"
#include "morphsim/impl_semantics.hpp"
#include "morphsim/workload.hpp"

namespace morphsim::oracle {

// Every sequentially consistent outcome of the workload: for each complete
// interleaving, the values read, keyed by (thread, program index).
std::set<std::map<std::pair<std::uint32_t, std::size_t>, std::int64_t>>
sc_read_outcomes(const Workload& w);

// Number of complete interleavings (maximal executions) of the workload.
std::uint64_t sc_interleaving_count(const Workload& w);

// Data-race freedom by direct recursion over reference configurations,
// checking for co-enabled conflicting accesses at every reachable state.
struct DrfOracleResult {
  bool drf = true;
  std::set<std::tuple<std::uint32_t, std::uint32_t, std::string>> witnesses;
  std::uint64_t states = 0;
};

DrfOracleResult drf_oracle(const Workload& w);

// All update-protocol normal forms reachable from s by system transitions
// alone, plus whether a system-only cycle is reachable.
struct NormalFormsResult {
  std::set<ImplState> normal_forms;
  bool has_cycle = false;
};

NormalFormsResult system_normal_forms(const ImplState& s);

// Literal weak-response enumeration: all u b v with u, v internal simple
// paths (no repeated state within each segment) and b functionally
// equivalent to the challenge; minimum cost per end state.
std::map<StateId, std::uint64_t> weak_responses_simple_paths(
    const LtsCore& lts, StateId from, const Action& challenge,
    const ObsConfig& cfg);

// Minimal surviving credit of the amortised game by plain minimax recursion
// (requires an acyclic game graph; asserts if it finds otherwise).  Returns
// nullopt when no credit up to `credit_limit` lets the defender survive.
std::optional<std::uint64_t> game_min_credit(const LtsCore& lhs,
                                             const LtsCore& rhs,
                                             const ObsConfig& cfg,
                                             std::uint64_t credit_limit = 64);

}  // namespace morphsim::oracle

#endif  // MORPHSIM_TESTS_ORACLES_HPP_
