#include "morphsim/explore.hpp"

#include <iomanip>
#include <sstream>

namespace morphsim {

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

std::string hex16(std::uint64_t h) {
  std::ostringstream out;
  out << "0x" << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

}  // namespace

std::string export_lts_text(const LtsCore& lts) {
  std::ostringstream out;
  out << "initial " << hex16(lts.hashes[lts.initial]) << "\n";
  for (std::size_t i = 0; i < lts.num_states(); ++i) {
    out << "state " << hex16(lts.hashes[i]) << " " << lts.labels[i];
    if (lts.completed[i]) out << " ;completed";
    out << "\n";
  }
  for (std::size_t i = 0; i < lts.num_states(); ++i) {
    for (const auto& e : lts.adj[i]) {
      out << hex16(lts.hashes[i]) << " " << e.action.to_text() << " " << e.cost
          << " " << hex16(lts.hashes[e.dst]) << "\n";
    }
  }
  return out.str();
}

}  // namespace morphsim
