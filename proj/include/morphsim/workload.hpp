#ifndef MORPHSIM_WORKLOAD_HPP_
#define MORPHSIM_WORKLOAD_HPP_

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "morphsim/errors.hpp"

namespace morphsim {

// One straight-line thread instruction.  Data variables and lock variables
// live in disjoint namespaces; `var` holds whichever one the opcode needs.
struct Instruction {
  enum class Op { read, write, compute, lock, unlock };

  Op op = Op::compute;
  std::string var;
  std::int64_t value = 0;  // write operand only

  auto operator<=>(const Instruction&) const = default;
};

struct ThreadProgram {
  std::vector<Instruction> instructions;

  auto operator<=>(const ThreadProgram&) const = default;
};

// A workload: N cores, one pinned thread per core, an initial store covering
// every data variable any thread touches, and a set of locks (all free).
struct Workload {
  std::uint32_t num_cores = 0;
  std::map<std::string, std::int64_t> init_store;
  std::vector<ThreadProgram> threads;  // threads[i] runs on core i
  std::set<std::string> locks;

  auto operator<=>(const Workload&) const = default;

  std::size_t total_instructions() const {
    std::size_t n = 0;
    for (const auto& t : threads) n += t.instructions.size();
    return n;
  }
};

// Parses the line-oriented workload format:
//
//   cores <N>
//   init <var>=<int> ...
//   locks <lockvar> ...          (optional)
//   thread <core-id>: [instruction]
//     read <var> | write <var> <int> | compute | lock <l> | unlock <l>
//
// `#` starts a comment.  Cores without a thread block get an empty program.
// Throws ParseError on syntax violations, duplicate core assignment,
// accesses to undeclared variables, out-of-range cores, or a negative core
// count.  parse_workload(render_workload(w)) == w for every valid w.
Workload parse_workload(const std::string& text);

// Canonical text form; the identity above pins it down.
std::string render_workload(const Workload& w);

}  // namespace morphsim

#endif  // MORPHSIM_WORKLOAD_HPP_
