#ifndef MORPHSIM_ANALYSIS_HPP_
#define MORPHSIM_ANALYSIS_HPP_

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "morphsim/clustering.hpp"
#include "morphsim/explore.hpp"
#include "morphsim/impl_semantics.hpp"
#include "morphsim/ref_semantics.hpp"
#include "morphsim/workload.hpp"

namespace morphsim {

struct ObsConfig {
  // Lock operations exist identically in both machines; whether they count
  // as observable is a reporting choice, not a semantic one.
  bool locks_observable = true;
};

enum class ActionClass : std::uint8_t {
  read,          // rd, rd_l, rd_s, rd_p
  write,         // wr, wr_l
  lock_acquire,
  lock_release,
  internal,      // tau, evict, cupd, supd, reconf
};

ActionClass class_of(const Action& a, const ObsConfig& cfg);
bool is_observable(const Action& a, const ObsConfig& cfg);

// Functional equivalence: same class, and for reads/writes the same
// (variable, value, thread); lock actions match on (lock, thread); all
// internal actions are mutually equivalent whatever their parameters.
bool functionally_equivalent(const Action& a, const Action& b,
                             const ObsConfig& cfg);

// Drops the internal actions of a trace, keeping observables verbatim.
std::vector<Action> observable_projection(const Trace& t, const ObsConfig& cfg);

// Canonical key of one observable action under functional equivalence.
struct ObsKey {
  std::uint8_t rank = 0;  // read 0, write 1, acquire 2, release 3
  std::string var;
  std::int64_t value = 0;
  std::int32_t thread = -1;

  auto operator<=>(const ObsKey&) const = default;
};

ObsKey obs_key(const Action& a, const ObsConfig& cfg);

using ObsTrace = std::vector<ObsKey>;

// The maximal observable traces of an LTS, quotiented by functional
// equivalence, with one concrete representative (including its internal
// actions) per class.  A trace is maximal once no program transition is
// enabled (all threads terminated or blocked); pending system activity does
// not extend it observably.  Internal cycles are handled: a path may spin on
// system or reconfiguration moves without adding observable content.
struct TraceLanguage {
  std::set<ObsTrace> traces;
  std::map<ObsTrace, Trace> representatives;
};

TraceLanguage obs_trace_language(const LtsCore& lts, const ObsConfig& cfg,
                                 std::uint64_t trace_cap = 100'000);

struct ConformanceVerdict {
  bool conforms = true;
  std::optional<Trace> counterexample;  // first missing trace, concrete form
  std::uint64_t checked_traces = 0;

  ConformanceVerdict() = default;
};

// Observable-trace inclusion: every maximal observable trace of `subject`
// must occur (up to functional equivalence) in `reference`.  Both directions
// of an equivalence are two calls with the arguments swapped.
ConformanceVerdict check_conformance(const LtsCore& subject,
                                     const LtsCore& reference,
                                     const ObsConfig& cfg,
                                     std::uint64_t trace_cap = 100'000);

// Core i's view of x: the cached value if the core's cluster holds x, the
// store value otherwise.  Throws std::out_of_range for unknown variables.
std::int64_t view(const ImplState& s, std::uint32_t core, const std::string& var);

struct CoherenceReport {
  bool ok = true;
  // For each violating variable, the disagreeing dirty copies (cache, value).
  std::map<std::string, std::vector<std::pair<std::uint32_t, std::int64_t>>>
      violations;
};

bool is_coherent(const ImplState& s);
CoherenceReport coherence_report(const ImplState& s);

struct ConsistencyReport {
  bool ok = true;
  // For each violating variable, the offending copies (cache, value, dirty).
  std::map<std::string,
           std::vector<std::tuple<std::uint32_t, std::int64_t, bool>>>
      violations;
};

bool is_consistent(const ImplState& s);
ConsistencyReport consistency_report(const ImplState& s);

// The unique reduct of a coherent state: its committed store plus the
// carried-over thread and lock state.  Equals the normal form reached by
// exhausting system transitions.  Throws IncoherentError otherwise.
RefState reduct(const ImplState& s);

struct DrfResult {
  bool drf = true;
  std::optional<RaceWitness> witness;
  std::uint64_t states_explored = 0;
};

// Data-race freedom is decided on the reference semantics alone, by
// exhaustive exploration from the workload's initial state.  The starting
// clustering takes no part beyond a core-count check.
DrfResult is_drf(const Workload& w, const Clustering& q_start,
                 const ExploreOptions& opt = {});

}  // namespace morphsim

#endif  // MORPHSIM_ANALYSIS_HPP_
