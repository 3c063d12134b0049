#include "morphsim/action.hpp"

#include <charconv>
#include <optional>
#include <sstream>

namespace morphsim {

namespace {

std::optional<std::int64_t> parse_i64(const std::string& s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

std::string Action::to_text() const {
  std::ostringstream out;
  switch (kind) {
    case ActionKind::ref_read:
      out << "rd " << var << " " << value << " " << actor;
      break;
    case ActionKind::ref_write:
      out << "wr " << var << " " << value << " " << actor;
      break;
    case ActionKind::local_read:
      out << "rd_l " << var << " " << value << " " << actor;
      break;
    case ActionKind::store_read:
      out << "rd_s " << var << " " << value << " " << actor;
      break;
    case ActionKind::pull_read:
      out << "rd_p " << var << " " << value << " " << actor;
      break;
    case ActionKind::local_write:
      out << "wr_l " << var << " " << value << " " << actor;
      break;
    case ActionKind::tau:
      out << "tau " << actor;
      break;
    case ActionKind::lock_acquire:
      out << "lock " << var << " " << actor;
      break;
    case ActionKind::lock_release:
      out << "unlock " << var << " " << actor;
      break;
    case ActionKind::evict:
      out << "evict " << actor << " " << var;
      break;
    case ActionKind::cache_update:
      out << "cupd " << actor << " " << target << " " << var;
      break;
    case ActionKind::store_update:
      out << "supd " << actor << " " << var;
      break;
    case ActionKind::reconf:
      out << "reconf " << from_clustering << " " << to_clustering;
      break;
  }
  return out.str();
}

std::string Action::actor_label() const {
  switch (kind) {
    case ActionKind::evict:
    case ActionKind::cache_update:
    case ActionKind::store_update:
      return "c" + std::to_string(actor);
    case ActionKind::reconf:
      return "-";
    default:
      return "t" + std::to_string(actor);
  }
}

Action parse_action(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> t;
  std::string tok;
  while (in >> tok) t.push_back(tok);
  auto bad = [&]() -> ParseError {
    return ParseError(1, 1, "bad action '" + text + "'");
  };
  if (t.empty()) throw bad();

  auto rvi = [&](ActionKind k) {
    if (t.size() != 4) throw bad();
    auto v = parse_i64(t[2]);
    auto i = parse_i64(t[3]);
    if (!v || !i) throw bad();
    Action a;
    a.kind = k;
    a.var = t[1];
    a.value = *v;
    a.actor = static_cast<std::int32_t>(*i);
    return a;
  };

  if (t[0] == "rd") return rvi(ActionKind::ref_read);
  if (t[0] == "wr") return rvi(ActionKind::ref_write);
  if (t[0] == "rd_l") return rvi(ActionKind::local_read);
  if (t[0] == "rd_s") return rvi(ActionKind::store_read);
  if (t[0] == "rd_p") return rvi(ActionKind::pull_read);
  if (t[0] == "wr_l") return rvi(ActionKind::local_write);
  if (t[0] == "tau") {
    if (t.size() != 2) throw bad();
    auto i = parse_i64(t[1]);
    if (!i) throw bad();
    return make_tau(static_cast<std::int32_t>(*i));
  }
  if (t[0] == "lock" || t[0] == "unlock") {
    if (t.size() != 3) throw bad();
    auto i = parse_i64(t[2]);
    if (!i) throw bad();
    return t[0] == "lock"
               ? make_lock_acquire(t[1], static_cast<std::int32_t>(*i))
               : make_lock_release(t[1], static_cast<std::int32_t>(*i));
  }
  if (t[0] == "evict") {
    if (t.size() != 3) throw bad();
    auto c = parse_i64(t[1]);
    if (!c) throw bad();
    return make_evict(static_cast<std::int32_t>(*c), t[2]);
  }
  if (t[0] == "cupd") {
    if (t.size() != 4) throw bad();
    auto s = parse_i64(t[1]);
    auto d = parse_i64(t[2]);
    if (!s || !d) throw bad();
    return make_cache_update(static_cast<std::int32_t>(*s),
                             static_cast<std::int32_t>(*d), t[3]);
  }
  if (t[0] == "supd") {
    if (t.size() != 3) throw bad();
    auto c = parse_i64(t[1]);
    if (!c) throw bad();
    return make_store_update(static_cast<std::int32_t>(*c), t[2]);
  }
  if (t[0] == "reconf") {
    if (t.size() != 3) throw bad();
    return make_reconf(t[1], t[2]);
  }
  throw bad();
}

Action make_ref_read(const std::string& var, std::int64_t v, std::int32_t thread) {
  Action a;
  a.kind = ActionKind::ref_read;
  a.var = var;
  a.value = v;
  a.actor = thread;
  return a;
}

Action make_ref_write(const std::string& var, std::int64_t v, std::int32_t thread) {
  Action a;
  a.kind = ActionKind::ref_write;
  a.var = var;
  a.value = v;
  a.actor = thread;
  return a;
}

Action make_local_read(const std::string& var, std::int64_t v, std::int32_t thread) {
  Action a;
  a.kind = ActionKind::local_read;
  a.var = var;
  a.value = v;
  a.actor = thread;
  return a;
}

Action make_store_read(const std::string& var, std::int64_t v, std::int32_t thread) {
  Action a;
  a.kind = ActionKind::store_read;
  a.var = var;
  a.value = v;
  a.actor = thread;
  return a;
}

Action make_pull_read(const std::string& var, std::int64_t v, std::int32_t thread) {
  Action a;
  a.kind = ActionKind::pull_read;
  a.var = var;
  a.value = v;
  a.actor = thread;
  return a;
}

Action make_local_write(const std::string& var, std::int64_t v, std::int32_t thread) {
  Action a;
  a.kind = ActionKind::local_write;
  a.var = var;
  a.value = v;
  a.actor = thread;
  return a;
}

Action make_tau(std::int32_t thread) {
  Action a;
  a.kind = ActionKind::tau;
  a.actor = thread;
  return a;
}

Action make_lock_acquire(const std::string& lockvar, std::int32_t thread) {
  Action a;
  a.kind = ActionKind::lock_acquire;
  a.var = lockvar;
  a.actor = thread;
  return a;
}

Action make_lock_release(const std::string& lockvar, std::int32_t thread) {
  Action a;
  a.kind = ActionKind::lock_release;
  a.var = lockvar;
  a.actor = thread;
  return a;
}

Action make_evict(std::int32_t cache, const std::string& var) {
  Action a;
  a.kind = ActionKind::evict;
  a.var = var;
  a.actor = cache;
  return a;
}

Action make_cache_update(std::int32_t src, std::int32_t dst, const std::string& var) {
  Action a;
  a.kind = ActionKind::cache_update;
  a.var = var;
  a.actor = src;
  a.target = dst;
  return a;
}

Action make_store_update(std::int32_t cache, const std::string& var) {
  Action a;
  a.kind = ActionKind::store_update;
  a.var = var;
  a.actor = cache;
  return a;
}

Action make_reconf(const std::string& from, const std::string& to) {
  Action a;
  a.kind = ActionKind::reconf;
  a.from_clustering = from;
  a.to_clustering = to;
  return a;
}

}  // namespace morphsim
