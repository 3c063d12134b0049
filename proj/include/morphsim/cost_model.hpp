#ifndef MORPHSIM_COST_MODEL_HPP_
#define MORPHSIM_COST_MODEL_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "morphsim/action.hpp"

namespace morphsim {

// Latency parameters.  kappa: cache access, delta: store/bus access,
// theta: internal step, mu: reconfiguration.  Defaults follow the usual
// cycle estimates (1, 4, 1, 1000).
struct CostParams {
  std::uint64_t kappa = 1;
  std::uint64_t delta = 4;
  std::uint64_t theta = 1;
  std::uint64_t mu = 1000;

  // Throws std::invalid_argument when kappa >= delta or mu < delta;
  // returns human-readable warnings (e.g. mu not clearly dominant).
  std::vector<std::string> validate() const;
};

// Per-action latency:
//   rd, wr, rd_s, rd_p, supd, lock, unlock -> delta
//   rd_l, wr_l                             -> kappa
//   tau                                    -> theta
//   evict                                  -> 0
//   cupd                                   -> 0 intra-cluster, else delta
//   reconf                                 -> mu
std::uint64_t action_cost(const Action& a, const CostParams& p);

std::uint64_t trace_cost(const Trace& t, const CostParams& p);

// Rebuilds a trace from parsed actions, attaching their costs.
Trace cost_trace(const std::vector<Action>& actions, const CostParams& p);

// Credit arithmetic of deferred write-backs for one concrete trace:
// every wr_l defers a store commit, banking (delta - kappa) against the
// flush it may pay later.
struct BreakevenReport {
  std::uint64_t deferred_writes = 0;     // wr_l count (m)
  std::uint64_t cheap_ops = 0;           // all kappa-cost actions
  std::uint64_t additional_cheap_ops = 0;  // cheap ops beyond the writes
  std::uint64_t savings = 0;             // cheap_ops * (delta - kappa)
  std::uint64_t flush_overhead = 0;      // evict/cupd/supd costs paid
  std::int64_t credit = 0;               // m*(delta-kappa) - flush_overhead
  std::int64_t net = 0;                  // savings - flush_overhead
  std::uint64_t breakeven_count = 0;     // ceil(m*kappa / (delta-kappa))
  bool cleared = false;  // additional_cheap_ops >= breakeven_count
};

BreakevenReport breakeven_report(const Trace& t, const CostParams& p);

}  // namespace morphsim

#endif  // MORPHSIM_COST_MODEL_HPP_
