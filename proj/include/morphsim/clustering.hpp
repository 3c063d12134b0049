#ifndef MORPHSIM_CLUSTERING_HPP_
#define MORPHSIM_CLUSTERING_HPP_

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "morphsim/errors.hpp"

namespace morphsim {

// A partition of the core identifiers {0..N-1}.  Clusters are kept in
// canonical form: ordered by smallest member, members ascending; cluster_of
// is derived from that numbering, so equality is structural.
struct Clustering {
  std::uint32_t num_cores = 0;
  std::vector<std::uint32_t> cluster_of;            // core -> cluster id
  std::vector<std::vector<std::uint32_t>> clusters;  // cluster id -> cores

  auto operator<=>(const Clustering&) const = default;

  std::uint32_t cluster_count() const {
    return static_cast<std::uint32_t>(clusters.size());
  }

  // True iff cores i and j share a cluster (and hence a cache).
  bool same_cluster(std::uint32_t i, std::uint32_t j) const;

  // Canonical text: `k(c1,...,ck)` when clusters are contiguous core
  // ranges in order, else the explicit `{i,j}{...}` form.
  std::string to_string() const;

  // Builds a partition from explicit member sets (canonicalising order).
  static Clustering from_sets(std::uint32_t n,
                              std::vector<std::vector<std::uint32_t>> sets);
  // Contiguous assignment: the j-th cluster takes the next sizes[j] cores.
  static Clustering from_sizes(const std::vector<std::uint32_t>& sizes);
  static Clustering smp(std::uint32_t n);  // n(1,...,1), all caches private
  static Clustering cmp(std::uint32_t n);  // 1(n), one shared cache
};

// Accepts `k(c1,...,ck)` (with sum == n), `smp`, `cmp`, or an explicit
// partition `{0,2}{1,3}`.  Throws ParseError on malformed input, a size sum
// mismatch, an empty cluster, or a set form that is not a partition of
// {0..n-1}.
Clustering parse_clustering(const std::string& text, std::uint32_t n);

// Partition refinement: true iff every cluster of q is contained in some
// cluster of q_prime.  Partial order with smp(n) at the bottom and cmp(n)
// at the top.  Throws std::invalid_argument on mismatched core counts.
bool refines(const Clustering& q, const Clustering& q_prime);

}  // namespace morphsim

#endif  // MORPHSIM_CLUSTERING_HPP_
