#include "morphsim/workload.hpp"

#include <cctype>
#include <charconv>
#include <optional>
#include <sstream>

namespace morphsim {

namespace {

struct Token {
  std::string text;
  std::size_t column;
};

// Splits a line at whitespace, dropping everything from `#` on.
std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
           line[i] != '#') {
      ++i;
    }
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

std::optional<std::int64_t> parse_int(const std::string& s) {
  std::int64_t v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return v;
}

[[noreturn]] void fail(std::size_t line, std::size_t col, const std::string& msg) {
  throw ParseError(line, col, msg);
}

}  // namespace

Workload parse_workload(const std::string& text) {
  Workload w;
  bool saw_cores = false;
  bool saw_init = false;
  std::set<std::string> declared_cores;
  std::int64_t current_thread = -1;

  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;

  // Instructions are collected per core; validation against the store runs
  // after the whole file is read so forward references to `init` lines fail
  // identically to missing ones.
  struct PendingAccess {
    std::size_t line, col;
    std::string var;
    bool is_lock;
    const char* what;
  };
  std::vector<PendingAccess> accesses;

  while (std::getline(in, raw)) {
    ++lineno;
    auto toks = tokenize(raw);
    if (toks.empty()) continue;
    const std::string& head = toks[0].text;

    if (head == "cores") {
      if (saw_cores) fail(lineno, toks[0].column, "duplicate cores line");
      if (toks.size() != 2) fail(lineno, toks[0].column, "expected: cores <N>");
      auto n = parse_int(toks[1].text);
      if (!n) fail(lineno, toks[1].column, "core count is not an integer");
      if (*n < 0) fail(lineno, toks[1].column, "negative core count");
      w.num_cores = static_cast<std::uint32_t>(*n);
      w.threads.assign(w.num_cores, ThreadProgram{});
      saw_cores = true;
      continue;
    }
    if (!saw_cores) fail(lineno, toks[0].column, "expected cores line first");

    if (head == "init") {
      saw_init = true;
      for (std::size_t k = 1; k < toks.size(); ++k) {
        auto eq = toks[k].text.find('=');
        if (eq == std::string::npos) {
          fail(lineno, toks[k].column, "expected <var>=<int>");
        }
        std::string var = toks[k].text.substr(0, eq);
        std::string val = toks[k].text.substr(eq + 1);
        if (!is_identifier(var)) fail(lineno, toks[k].column, "bad variable name '" + var + "'");
        auto v = parse_int(val);
        if (!v) fail(lineno, toks[k].column, "bad integer for '" + var + "'");
        if (w.init_store.count(var)) {
          fail(lineno, toks[k].column, "duplicate init for '" + var + "'");
        }
        w.init_store[var] = *v;
      }
      continue;
    }

    if (head == "locks") {
      for (std::size_t k = 1; k < toks.size(); ++k) {
        if (!is_identifier(toks[k].text)) {
          fail(lineno, toks[k].column, "bad lock name '" + toks[k].text + "'");
        }
        w.locks.insert(toks[k].text);
      }
      continue;
    }

    if (head == "thread") {
      if (toks.size() < 2) fail(lineno, toks[0].column, "expected: thread <core-id>:");
      std::string id = toks[1].text;
      std::size_t inline_from = 2;
      if (!id.empty() && id.back() == ':') {
        id.pop_back();
      } else if (toks.size() >= 3 && toks[2].text == ":") {
        inline_from = 3;
      } else {
        fail(lineno, toks[1].column, "expected ':' after core id");
      }
      auto n = parse_int(id);
      if (!n) fail(lineno, toks[1].column, "core id is not an integer");
      if (*n < 0 || *n >= static_cast<std::int64_t>(w.num_cores)) {
        fail(lineno, toks[1].column, "core out of range");
      }
      if (!declared_cores.insert(id).second) {
        fail(lineno, toks[1].column, "duplicate core assignment for core " + id);
      }
      current_thread = *n;
      if (inline_from < toks.size()) {
        // Single instruction on the thread line itself.
        toks.erase(toks.begin(), toks.begin() + static_cast<std::ptrdiff_t>(inline_from));
      } else {
        continue;
      }
    } else if (current_thread < 0) {
      fail(lineno, toks[0].column, "instruction outside a thread block");
    }

    // Instruction line (or the inline remainder of a thread line).
    Instruction ins;
    const std::string& op = toks[0].text;
    auto need = [&](std::size_t n) {
      if (toks.size() != n) fail(lineno, toks[0].column, "wrong arity for '" + op + "'");
    };
    if (op == "read") {
      need(2);
      ins.op = Instruction::Op::read;
      ins.var = toks[1].text;
      accesses.push_back({lineno, toks[1].column, ins.var, false, "read"});
    } else if (op == "write") {
      need(3);
      ins.op = Instruction::Op::write;
      ins.var = toks[1].text;
      auto v = parse_int(toks[2].text);
      if (!v) fail(lineno, toks[2].column, "bad write value");
      ins.value = *v;
      accesses.push_back({lineno, toks[1].column, ins.var, false, "write"});
    } else if (op == "compute") {
      need(1);
      ins.op = Instruction::Op::compute;
    } else if (op == "lock") {
      need(2);
      ins.op = Instruction::Op::lock;
      ins.var = toks[1].text;
      accesses.push_back({lineno, toks[1].column, ins.var, true, "lock"});
    } else if (op == "unlock") {
      need(2);
      ins.op = Instruction::Op::unlock;
      ins.var = toks[1].text;
      accesses.push_back({lineno, toks[1].column, ins.var, true, "unlock"});
    } else {
      fail(lineno, toks[0].column, "unknown instruction '" + op + "'");
    }
    if (!ins.var.empty() && !is_identifier(ins.var)) {
      fail(lineno, toks[1].column, "bad variable name '" + ins.var + "'");
    }
    w.threads[static_cast<std::size_t>(current_thread)].instructions.push_back(ins);
  }

  if (!saw_cores) fail(lineno + 1, 1, "missing cores line");
  (void)saw_init;

  // Lock variables used by instructions are declared implicitly.
  for (const auto& a : accesses) {
    if (a.is_lock) w.locks.insert(a.var);
  }
  // Namespace disjointness, then store coverage.
  for (const auto& l : w.locks) {
    if (w.init_store.count(l)) {
      fail(1, 1, "identifier '" + l + "' used as both variable and lock");
    }
  }
  for (const auto& a : accesses) {
    if (a.is_lock) continue;
    if (w.locks.count(a.var)) {
      fail(a.line, a.col, "identifier '" + a.var + "' used as both variable and lock");
    }
    if (!w.init_store.count(a.var)) {
      fail(a.line, a.col,
           std::string(a.what) + " of undeclared variable '" + a.var + "'");
    }
  }
  return w;
}

std::string render_workload(const Workload& w) {
  std::ostringstream out;
  out << "cores " << w.num_cores << "\n";
  out << "init";
  for (const auto& [var, val] : w.init_store) out << " " << var << "=" << val;
  out << "\n";
  if (!w.locks.empty()) {
    out << "locks";
    for (const auto& l : w.locks) out << " " << l;
    out << "\n";
  }
  for (std::uint32_t i = 0; i < w.num_cores; ++i) {
    out << "thread " << i << ":\n";
    for (const auto& ins : w.threads[i].instructions) {
      out << "  ";
      switch (ins.op) {
        case Instruction::Op::read:
          out << "read " << ins.var;
          break;
        case Instruction::Op::write:
          out << "write " << ins.var << " " << ins.value;
          break;
        case Instruction::Op::compute:
          out << "compute";
          break;
        case Instruction::Op::lock:
          out << "lock " << ins.var;
          break;
        case Instruction::Op::unlock:
          out << "unlock " << ins.var;
          break;
      }
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace morphsim
