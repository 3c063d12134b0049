#include "morphsim/clustering.hpp"

#include <algorithm>
#include <charconv>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace morphsim {

namespace {

[[noreturn]] void fail(std::size_t col, const std::string& msg) {
  throw ParseError(1, col, msg);
}

std::optional<std::uint32_t> parse_u32(const std::string& s) {
  std::uint32_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

bool Clustering::same_cluster(std::uint32_t i, std::uint32_t j) const {
  if (i >= num_cores || j >= num_cores) {
    throw std::out_of_range("core id out of range");
  }
  return cluster_of[i] == cluster_of[j];
}

std::string Clustering::to_string() const {
  // Contiguous in order?
  bool contiguous = true;
  std::uint32_t next = 0;
  for (const auto& c : clusters) {
    for (std::uint32_t core : c) {
      if (core != next++) {
        contiguous = false;
        break;
      }
    }
    if (!contiguous) break;
  }
  std::ostringstream out;
  if (contiguous) {
    out << clusters.size() << "(";
    for (std::size_t j = 0; j < clusters.size(); ++j) {
      if (j) out << ",";
      out << clusters[j].size();
    }
    out << ")";
  } else {
    for (const auto& c : clusters) {
      out << "{";
      for (std::size_t k = 0; k < c.size(); ++k) {
        if (k) out << ",";
        out << c[k];
      }
      out << "}";
    }
  }
  return out.str();
}

Clustering Clustering::from_sets(std::uint32_t n,
                                 std::vector<std::vector<std::uint32_t>> sets) {
  for (auto& s : sets) std::sort(s.begin(), s.end());
  std::sort(sets.begin(), sets.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  Clustering q;
  q.num_cores = n;
  q.cluster_of.assign(n, 0);
  std::set<std::uint32_t> seen;
  for (const auto& s : sets) {
    if (s.empty()) fail(1, "empty cluster");
    for (std::uint32_t core : s) {
      if (core >= n) fail(1, "core id out of range in cluster set");
      if (!seen.insert(core).second) fail(1, "core listed in two clusters");
      q.cluster_of[core] = static_cast<std::uint32_t>(q.clusters.size());
    }
    q.clusters.push_back(s);
  }
  if (seen.size() != n) fail(1, "cluster sets do not cover all cores");
  return q;
}

Clustering Clustering::from_sizes(const std::vector<std::uint32_t>& sizes) {
  Clustering q;
  std::uint32_t next = 0;
  for (std::uint32_t c : sizes) {
    if (c == 0) fail(1, "empty cluster");
    std::vector<std::uint32_t> members;
    for (std::uint32_t k = 0; k < c; ++k) members.push_back(next++);
    q.clusters.push_back(members);
  }
  q.num_cores = next;
  q.cluster_of.assign(next, 0);
  for (std::uint32_t j = 0; j < q.clusters.size(); ++j) {
    for (std::uint32_t core : q.clusters[j]) q.cluster_of[core] = j;
  }
  return q;
}

Clustering Clustering::smp(std::uint32_t n) {
  return from_sizes(std::vector<std::uint32_t>(n, 1));
}

Clustering Clustering::cmp(std::uint32_t n) {
  if (n == 0) return from_sizes({});
  return from_sizes({n});
}

Clustering parse_clustering(const std::string& text, std::uint32_t n) {
  if (text == "smp") return Clustering::smp(n);
  if (text == "cmp") return Clustering::cmp(n);

  if (!text.empty() && text[0] == '{') {
    // Explicit partition form {a,b}{c}...
    std::vector<std::vector<std::uint32_t>> sets;
    std::size_t i = 0;
    while (i < text.size()) {
      if (text[i] != '{') fail(i + 1, "expected '{'");
      std::size_t close = text.find('}', i);
      if (close == std::string::npos) fail(i + 1, "missing '}'");
      std::vector<std::uint32_t> members;
      std::string body = text.substr(i + 1, close - i - 1);
      std::istringstream ss(body);
      std::string item;
      while (std::getline(ss, item, ',')) {
        auto v = parse_u32(item);
        if (!v) fail(i + 2, "bad core id '" + item + "'");
        members.push_back(*v);
      }
      if (members.empty()) fail(i + 1, "empty cluster");
      sets.push_back(std::move(members));
      i = close + 1;
    }
    return Clustering::from_sets(n, std::move(sets));
  }

  // k(c1,...,ck)
  auto open = text.find('(');
  if (open == std::string::npos || text.back() != ')') {
    fail(1, "expected k(c1,...,ck), smp, cmp or {..}{..}");
  }
  auto k = parse_u32(text.substr(0, open));
  if (!k) fail(1, "bad cluster count");
  std::vector<std::uint32_t> sizes;
  std::string body = text.substr(open + 1, text.size() - open - 2);
  if (!body.empty()) {
    std::istringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto v = parse_u32(item);
      if (!v) fail(open + 2, "bad cluster size '" + item + "'");
      if (*v == 0) fail(open + 2, "empty cluster");
      sizes.push_back(*v);
    }
  }
  if (sizes.size() != *k) fail(1, "cluster count does not match list length");
  std::uint64_t sum = 0;
  for (auto c : sizes) sum += c;
  if (sum != n) {
    fail(1, "cluster sizes sum to " + std::to_string(sum) + ", expected " +
                std::to_string(n));
  }
  return Clustering::from_sizes(sizes);
}

bool refines(const Clustering& q, const Clustering& q_prime) {
  if (q.num_cores != q_prime.num_cores) {
    throw std::invalid_argument("clusterings have different core counts");
  }
  for (const auto& c : q.clusters) {
    std::uint32_t target = q_prime.cluster_of[c.front()];
    for (std::uint32_t core : c) {
      if (q_prime.cluster_of[core] != target) return false;
    }
  }
  return true;
}

}  // namespace morphsim
