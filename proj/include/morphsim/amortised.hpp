#ifndef MORPHSIM_AMORTISED_HPP_
#define MORPHSIM_AMORTISED_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "morphsim/analysis.hpp"
#include "morphsim/cost_model.hpp"
#include "morphsim/explore.hpp"

namespace morphsim {

// Weak responses to a challenge action: every state reachable as u b v where
// u and v are internal-only simple paths and b is functionally equivalent to
// the challenge (b is omitted when the challenge itself is internal, which
// includes answering by staying put at cost 0).  For each end state, the
// cheapest such response; nonnegative costs make simple paths sufficient.
std::map<StateId, std::uint64_t> weak_responses(const LtsCore& lts, StateId from,
                                                const Action& challenge,
                                                const CostParams& p,
                                                const ObsConfig& cfg);

enum class AmortisedResult {
  more_efficient,      // the left system matches every behaviour without
                       // ever outspending the right one (zero start credit)
  not_more_efficient,  // a challenger strategy defeats every defence
  inconclusive,        // deciding needs credit beyond the configured cap
};

struct AmortisedStep {
  int side = 1;  // 1: challenge on the left system, 2: on the right
  Action challenge;
  std::uint64_t challenge_cost = 0;
  std::optional<Trace> response;  // defender's best reply; absent if none
  std::int64_t credit_before = 0;
  std::int64_t credit_after = 0;
};

struct AmortisedVerdict {
  AmortisedResult result = AmortisedResult::inconclusive;
  std::uint64_t min_credit = 0;   // credit needed by the initial pair
  std::uint64_t bound = 0;        // the cap, when inconclusive
  std::uint64_t pairs_explored = 0;
  std::vector<AmortisedStep> witness;  // challenger strategy when defeated
};

// Decides whether lhs is weakly amortised more efficient than rhs.
//
// Credit game over state pairs: a challenger plays any transition of either
// side and the defender answers on the other side with a weak response of
// functionally equivalent observable content.  The credit tracks right-side
// spending minus left-side spending: a right challenge adds its full cost
// and subtracts the answering response's cost; a left challenge adds the
// response's cost but is itself charged only at its observable content, so
// adversarially scheduling the left system's own background transitions as
// challenges cannot bankrupt it (their real cost still counts whenever the
// defender plays them inside a response).  The defender survives if the
// credit never goes negative; cheap left-hand moves answering costly
// right-hand ones accumulate the slack that later flushes spend.  Minimal
// surviving credits are computed for every reachable pair by value
// iteration, clamped at credit_cap.  The verdict is for the initial pair at
// credit 0.
AmortisedVerdict amortised_compare(const LtsCore& lhs, const LtsCore& rhs,
                                   const CostParams& p,
                                   std::uint64_t credit_cap = 1'000'000,
                                   const ObsConfig& cfg = {},
                                   std::uint64_t pair_cap = 1'000'000);

}  // namespace morphsim

#endif  // MORPHSIM_AMORTISED_HPP_
