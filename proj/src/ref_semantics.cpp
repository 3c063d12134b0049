#include "morphsim/ref_semantics.hpp"

#include <sstream>

namespace morphsim {

RefState RefMachine::initial_state() const {
  RefState s;
  s.store = workload_->init_store;
  s.pcs.assign(workload_->num_cores, 0);
  for (const auto& l : workload_->locks) s.locks[l] = -1;
  return s;
}

std::vector<std::pair<Action, RefState>> RefMachine::successors(
    const RefState& s, std::uint64_t) const {
  std::vector<std::pair<Action, RefState>> out;
  for (std::uint32_t i = 0; i < workload_->num_cores; ++i) {
    const auto& prog = workload_->threads[i].instructions;
    if (s.pcs[i] >= prog.size()) continue;
    const Instruction& ins = prog[s.pcs[i]];
    switch (ins.op) {
      case Instruction::Op::read: {
        RefState next = s;
        next.pcs[i]++;
        out.emplace_back(
            make_ref_read(ins.var, s.store.at(ins.var), static_cast<std::int32_t>(i)),
            std::move(next));
        break;
      }
      case Instruction::Op::write: {
        RefState next = s;
        next.store[ins.var] = ins.value;
        next.pcs[i]++;
        out.emplace_back(
            make_ref_write(ins.var, ins.value, static_cast<std::int32_t>(i)),
            std::move(next));
        break;
      }
      case Instruction::Op::compute: {
        RefState next = s;
        next.pcs[i]++;
        out.emplace_back(make_tau(static_cast<std::int32_t>(i)), std::move(next));
        break;
      }
      case Instruction::Op::lock: {
        if (s.locks.at(ins.var) != -1) break;  // blocked
        RefState next = s;
        next.locks[ins.var] = static_cast<std::int32_t>(i);
        next.pcs[i]++;
        out.emplace_back(make_lock_acquire(ins.var, static_cast<std::int32_t>(i)),
                         std::move(next));
        break;
      }
      case Instruction::Op::unlock: {
        if (s.locks.at(ins.var) != static_cast<std::int32_t>(i)) break;
        RefState next = s;
        next.locks[ins.var] = -1;
        next.pcs[i]++;
        out.emplace_back(make_lock_release(ins.var, static_cast<std::int32_t>(i)),
                         std::move(next));
        break;
      }
    }
  }
  return out;
}

bool RefMachine::completed(const RefState& s) const {
  return successors(s, 0).empty();
}

std::string RefMachine::label(const RefState& s) const {
  std::ostringstream out;
  out << "S{";
  bool first = true;
  for (const auto& [var, val] : s.store) {
    if (!first) out << " ";
    first = false;
    out << var << "=" << val;
  }
  out << "} pc{";
  for (std::size_t i = 0; i < s.pcs.size(); ++i) {
    if (i) out << " ";
    out << s.pcs[i];
  }
  out << "} L{";
  first = true;
  for (const auto& [l, holder] : s.locks) {
    if (!first) out << " ";
    first = false;
    out << l << "=" << holder;
  }
  out << "}";
  return out.str();
}

RefLts explore_ref(const Workload& w, const ExploreOptions& opt) {
  RefMachine machine(w, opt.costs);
  auto r = explore(machine, opt.depth, opt.state_cap);
  return RefLts{std::move(r.core), std::move(r.states)};
}

std::optional<RaceWitness> is_racy_state(const Workload& w, const RefState& s) {
  auto access_of = [&](std::uint32_t i) -> const Instruction* {
    const auto& prog = w.threads[i].instructions;
    if (s.pcs[i] >= prog.size()) return nullptr;
    const Instruction& ins = prog[s.pcs[i]];
    if (ins.op == Instruction::Op::read || ins.op == Instruction::Op::write) {
      return &ins;
    }
    return nullptr;
  };
  for (std::uint32_t i = 0; i < w.num_cores; ++i) {
    const Instruction* a = access_of(i);
    if (!a) continue;
    for (std::uint32_t j = i + 1; j < w.num_cores; ++j) {
      const Instruction* b = access_of(j);
      if (!b || a->var != b->var) continue;
      bool a_writes = a->op == Instruction::Op::write;
      bool b_writes = b->op == Instruction::Op::write;
      if (!a_writes && !b_writes) continue;
      RaceWitness wit;
      wit.thread_a = i;
      wit.thread_b = j;
      wit.var = a->var;
      wit.kind_a = a_writes ? AccessKind::write : AccessKind::read;
      wit.kind_b = b_writes ? AccessKind::write : AccessKind::read;
      return wit;
    }
  }
  return std::nullopt;
}

std::vector<std::pair<RefState, RaceWitness>> detect_races(
    const Workload& w, const ExploreOptions& opt) {
  RefLts lts = explore_ref(w, opt);
  std::vector<std::pair<RefState, RaceWitness>> out;
  for (const auto& s : lts.states) {
    if (auto wit = is_racy_state(w, s)) {
      out.emplace_back(s, *wit);
    }
  }
  return out;
}

}  // namespace morphsim
