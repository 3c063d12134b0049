#ifndef MORPHSIM_ACTION_HPP_
#define MORPHSIM_ACTION_HPP_

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "morphsim/errors.hpp"

namespace morphsim {

// Transition labels shared by both machines.  Program actions carry the
// thread/core index in `actor`; system actions carry the source cache
// (cluster) index there, and cache_update also a target cache.
enum class ActionKind : std::uint8_t {
  ref_read,      // rd    reference read
  ref_write,     // wr    reference write
  local_read,    // rd_l  cache hit
  store_read,    // rd_s  read past the cache
  pull_read,     // rd_p  read that fills the cache
  local_write,   // wr_l  write-back into the cache
  tau,           // internal step not involving the store
  lock_acquire,  // blocking test-and-set on the lock store
  lock_release,
  evict,         // drop a clean cache entry
  cache_update,  // push a dirty value into another cache
  store_update,  // commit a dirty value to the store
  reconf,        // morph between clusterings
};

struct Action {
  ActionKind kind = ActionKind::tau;
  std::string var;            // data variable or lock variable
  std::int64_t value = 0;     // read/write value
  std::int32_t actor = -1;    // thread for program actions, cache for system
  std::int32_t target = -1;   // cache_update destination cache
  std::string from_clustering;  // reconf only, canonical text
  std::string to_clustering;

  auto operator<=>(const Action&) const = default;

  // Compact single-line form, e.g. `wr_l x 1 0`, `cupd 0 1 x`,
  // `reconf 2(1,1) 1(2)`.  parse_action inverts it.
  std::string to_text() const;

  // `t3` / `c1` / `-`, for trace listings.
  std::string actor_label() const;
};

Action parse_action(const std::string& text);

struct TraceStep {
  Action action;
  std::uint64_t cost = 0;

  auto operator<=>(const TraceStep&) const = default;
};

using Trace = std::vector<TraceStep>;

// Convenience constructors.
Action make_ref_read(const std::string& var, std::int64_t v, std::int32_t thread);
Action make_ref_write(const std::string& var, std::int64_t v, std::int32_t thread);
Action make_local_read(const std::string& var, std::int64_t v, std::int32_t thread);
Action make_store_read(const std::string& var, std::int64_t v, std::int32_t thread);
Action make_pull_read(const std::string& var, std::int64_t v, std::int32_t thread);
Action make_local_write(const std::string& var, std::int64_t v, std::int32_t thread);
Action make_tau(std::int32_t thread);
Action make_lock_acquire(const std::string& lockvar, std::int32_t thread);
Action make_lock_release(const std::string& lockvar, std::int32_t thread);
Action make_evict(std::int32_t cache, const std::string& var);
Action make_cache_update(std::int32_t src, std::int32_t dst, const std::string& var);
Action make_store_update(std::int32_t cache, const std::string& var);
Action make_reconf(const std::string& from, const std::string& to);

}  // namespace morphsim

#endif  // MORPHSIM_ACTION_HPP_
