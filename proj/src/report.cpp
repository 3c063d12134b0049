#include "morphsim/report.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

#include "morphsim/amortised.hpp"
#include "morphsim/analysis.hpp"
#include "morphsim/clustering.hpp"
#include "morphsim/cost_model.hpp"
#include "morphsim/errors.hpp"
#include "morphsim/impl_semantics.hpp"
#include "morphsim/ref_semantics.hpp"
#include "morphsim/workload.hpp"

namespace morphsim {

namespace {

using nlohmann::json;

json trace_to_json(const Trace& t, const ObsConfig& cfg) {
  json arr = json::array();
  std::size_t step = 0;
  for (const auto& ts : t) {
    arr.push_back({{"step", step++},
                   {"actor", ts.action.actor_label()},
                   {"action", ts.action.to_text()},
                   {"cost", ts.cost},
                   {"observable", is_observable(ts.action, cfg)}});
  }
  return arr;
}

void render_trace_text(std::ostream& out, const json& trace) {
  out << "  step  actor  action                     cost\n";
  for (const auto& ts : trace) {
    std::ostringstream act;
    act << ts.at("action").get<std::string>();
    out << "  " << std::setw(4) << ts.at("step").get<std::size_t>() << "  "
        << std::setw(5) << ts.at("actor").get<std::string>() << "  "
        << std::setw(25) << std::left << act.str() << std::right << "  "
        << std::setw(4) << ts.at("cost").get<std::uint64_t>();
    if (!ts.at("observable").get<bool>()) out << "  *";
    out << "\n";
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, 0, "cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json lts_to_json(const LtsCore& lts) {
  json states = json::array();
  for (std::size_t i = 0; i < lts.num_states(); ++i) {
    std::ostringstream hash;
    hash << "0x" << std::hex << std::setw(16) << std::setfill('0') << lts.hashes[i];
    states.push_back({{"id", i},
                      {"hash", hash.str()},
                      {"label", lts.labels[i]},
                      {"completed", static_cast<bool>(lts.completed[i])}});
  }
  json edges = json::array();
  for (std::size_t i = 0; i < lts.num_states(); ++i) {
    for (const auto& e : lts.adj[i]) {
      edges.push_back({{"src", i},
                       {"action", e.action.to_text()},
                       {"cost", e.cost},
                       {"dst", e.dst}});
    }
  }
  return {{"initial", lts.initial},
          {"states", states},
          {"edges", edges},
          {"stats",
           {{"states", lts.num_states()},
            {"edges", lts.num_edges()},
            {"reconf_skipped_incoherent", lts.reconf_skipped}}}};
}

struct CommonOptions {
  std::uint64_t depth = 1u << 20;
  std::uint64_t state_cap = 1'000'000;
  std::uint64_t trace_cap = 100'000;
  std::uint64_t credit_cap = 1'000'000;
  std::uint64_t kappa = 1, delta = 4, theta = 1, mu = 1000;
  bool locks_observable = true;
  std::string format = "text";
  std::uint64_t seed = 0;
  std::vector<std::string> reconf_events;  // "<step>:<clustering>"
  bool reconf_anywhere = false;
  std::vector<std::string> reconf_targets;

  CostParams costs() const { return CostParams{kappa, delta, theta, mu}; }
  ObsConfig obs() const { return ObsConfig{locks_observable}; }
  ReportFormat report_format() const {
    return format == "json" ? ReportFormat::json : ReportFormat::text;
  }

  json echo() const {
    return {{"depth", depth},
            {"state_cap", state_cap},
            {"trace_cap", trace_cap},
            {"credit_cap", credit_cap},
            {"kappa", kappa},
            {"delta", delta},
            {"theta", theta},
            {"mu", mu},
            {"locks_observable", locks_observable},
            {"seed", seed}};
  }
};

void add_common(CLI::App* cmd, CommonOptions* o) {
  cmd->add_option("--depth", o->depth, "exploration depth bound");
  cmd->add_option("--state-cap", o->state_cap, "state-count cap")->check(CLI::PositiveNumber);
  cmd->add_option("--trace-cap", o->trace_cap, "trace-set cap")->check(CLI::PositiveNumber);
  cmd->add_option("--credit-cap", o->credit_cap, "credit cap for amortised runs")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--kappa", o->kappa, "cache access cost");
  cmd->add_option("--delta", o->delta, "store access cost");
  cmd->add_option("--theta", o->theta, "internal step cost");
  cmd->add_option("--mu", o->mu, "reconfiguration cost");
  cmd->add_option("--locks-observable", o->locks_observable,
                  "treat lock operations as observable (default true)");
  cmd->add_option("--format", o->format, "output format")
      ->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--seed", o->seed, "seed echoed for property-test drivers");
}

void add_reconf(CLI::App* cmd, CommonOptions* o) {
  cmd->add_option("--reconf", o->reconf_events,
                  "reconfiguration event <step>:<clustering> (repeatable)");
  cmd->add_flag("--reconf-anywhere", o->reconf_anywhere,
                "offer reconfiguration at every coherent state");
  cmd->add_option("--reconf-targets", o->reconf_targets,
                  "targets for --reconf-anywhere (repeatable)");
}

ImplExploreOptions impl_options(const CommonOptions& o, std::uint32_t n) {
  ImplExploreOptions opt;
  opt.depth = o.depth;
  opt.state_cap = o.state_cap;
  opt.costs = o.costs();
  for (const auto& ev : o.reconf_events) {
    auto colon = ev.find(':');
    if (colon == std::string::npos) {
      throw ParseError(1, 1, "bad --reconf value '" + ev + "', expected <step>:<clustering>");
    }
    ReconfEvent e;
    try {
      e.at_step = std::stoull(ev.substr(0, colon));
    } catch (const std::exception&) {
      throw ParseError(1, 1, "bad --reconf step in '" + ev + "'");
    }
    e.target = parse_clustering(ev.substr(colon + 1), n);
    opt.events.push_back(std::move(e));
  }
  opt.reconf_anywhere = o.reconf_anywhere;
  for (const auto& t : o.reconf_targets) {
    opt.anywhere_targets.push_back(parse_clustering(t, n));
  }
  return opt;
}

// Builds either machine's LTS; `arch` is "ref" or a clustering spec.
LtsCore build_lts(const Workload& w, const std::string& arch,
                  const CommonOptions& o) {
  if (arch == "ref") {
    ExploreOptions opt;
    opt.depth = o.depth;
    opt.state_cap = o.state_cap;
    opt.costs = o.costs();
    return explore_ref(w, opt).core;
  }
  Clustering q = parse_clustering(arch, w.num_cores);
  return explore_impl(w, q, impl_options(o, w.num_cores)).core;
}

Trace load_trace(const std::string& path, const CostParams& p) {
  std::string text = read_file(path);
  std::vector<Action> actions;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
    if (blank) continue;
    try {
      actions.push_back(parse_action(line));
    } catch (const ParseError& e) {
      throw ParseError(lineno, 1, e.message());
    }
  }
  return cost_trace(actions, p);
}

}  // namespace

std::string format_report(const Report& r, ReportFormat fmt) {
  if (fmt == ReportFormat::json) {
    json j = {{"command", r.command},     {"inputs", r.inputs},
              {"verdict", r.verdict},     {"counterexample", r.counterexample},
              {"stats", r.stats},         {"error", r.error},
              {"exit_code", r.exit_code}};
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "command: " << r.command << "\n";
  if (!r.error.empty()) {
    out << "error: " << r.error << "\n";
    return out.str();
  }
  for (const auto& [key, val] : r.inputs.items()) {
    out << "  " << key << ": " << (val.is_string() ? val.get<std::string>() : val.dump())
        << "\n";
  }
  if (r.verdict.empty()) {
    out << "no findings\n";
  } else {
    for (const auto& [key, val] : r.verdict.items()) {
      if (key == "trace" && val.is_array()) {
        out << "trace (`*` marks unobservable actions):\n";
        render_trace_text(out, val);
        continue;
      }
      out << key << ": " << (val.is_string() ? val.get<std::string>() : val.dump())
          << "\n";
    }
  }
  if (!r.counterexample.is_null() && r.counterexample.is_array()) {
    out << "counterexample (`*` marks unobservable actions):\n";
    render_trace_text(out, r.counterexample);
  }
  if (!r.stats.empty()) {
    out << "stats:";
    for (const auto& [key, val] : r.stats.items()) {
      out << " " << key << "=" << val.dump();
    }
    out << "\n";
  }
  return out.str();
}

Report parse_report_json(const std::string& text) {
  json j = json::parse(text);
  Report r;
  r.command = j.at("command").get<std::string>();
  r.inputs = j.at("inputs");
  r.verdict = j.at("verdict");
  r.counterexample = j.at("counterexample");
  r.stats = j.at("stats");
  r.error = j.at("error").get<std::string>();
  r.exit_code = j.at("exit_code").get<int>();
  return r;
}

CommandResult run_command(const std::vector<std::string>& args) {
  CLI::App app{"morphsim: execution semantics and cost analysis for clustered "
               "multicore architectures"};
  app.require_subcommand(1);

  CommonOptions o;
  std::string workload_path, arch, arch2, against = "ref", trace_path;
  std::string from_arch, to_arch;
  std::uint64_t at_step = 0;
  bool bidirectional = false;

  auto* explore_cmd = app.add_subcommand("explore", "dump a labelled transition system");
  explore_cmd->add_option("workload", workload_path)->required();
  explore_cmd->add_option("arch", arch, "'ref' or a clustering")->required();
  add_common(explore_cmd, &o);
  add_reconf(explore_cmd, &o);

  auto* races_cmd = app.add_subcommand("races", "list reachable racy states");
  races_cmd->add_option("workload", workload_path)->required();
  add_common(races_cmd, &o);

  auto* drf_cmd = app.add_subcommand("drf", "decide data-race freedom");
  drf_cmd->add_option("workload", workload_path)->required();
  add_common(drf_cmd, &o);

  auto* conform_cmd =
      app.add_subcommand("conform", "observable-trace inclusion against a baseline");
  conform_cmd->add_option("workload", workload_path)->required();
  conform_cmd->add_option("arch", arch, "'ref' or a clustering")->required();
  conform_cmd->add_option("--against", against, "'ref' or a clustering (default ref)");
  conform_cmd->add_flag("--bidirectional", bidirectional, "check both inclusions");
  add_common(conform_cmd, &o);
  add_reconf(conform_cmd, &o);

  auto* reduct_cmd = app.add_subcommand(
      "reduct", "check closed-form reducts against protocol normal forms");
  reduct_cmd->add_option("workload", workload_path)->required();
  reduct_cmd->add_option("arch", arch, "a clustering")->required();
  add_common(reduct_cmd, &o);
  add_reconf(reduct_cmd, &o);

  auto* reconf_cmd = app.add_subcommand("reconf-sim", "simulate a reconfiguration");
  reconf_cmd->add_option("workload", workload_path)->required();
  reconf_cmd->add_option("--from", from_arch, "starting clustering")->required();
  reconf_cmd->add_option("--at", at_step, "trigger depth")->required();
  reconf_cmd->add_option("--to", to_arch, "target clustering")->required();
  add_common(reconf_cmd, &o);

  auto* cost_cmd = app.add_subcommand("cost", "cost a trace file");
  cost_cmd->add_option("trace", trace_path)->required();
  add_common(cost_cmd, &o);

  auto* amortise_cmd =
      app.add_subcommand("amortise", "weak amortised efficiency comparison");
  amortise_cmd->add_option("workload", workload_path)->required();
  amortise_cmd->add_option("arch1", arch, "'ref' or a clustering")->required();
  amortise_cmd->add_option("arch2", arch2, "'ref' or a clustering")->required();
  add_common(amortise_cmd, &o);

  auto* breakeven_cmd =
      app.add_subcommand("breakeven", "deferred-write credit report for a trace");
  breakeven_cmd->add_option("trace", trace_path)->required();
  add_common(breakeven_cmd, &o);

  CommandResult result;
  Report& r = result.report;

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    result.exit_code = 0;
    result.output = app.help();
    r.command = "help";
    r.exit_code = 0;
    return result;
  } catch (const CLI::ParseError& e) {
    result.exit_code = 2;
    r.command = args.empty() ? "" : args[0];
    r.error = e.what();
    r.exit_code = 2;
    result.output = format_report(r, o.report_format());
    return result;
  }

  auto finish = [&](int code) {
    r.exit_code = code;
    result.exit_code = code;
    if (result.output.empty()) result.output = format_report(r, o.report_format());
    return result;
  };

  try {
    o.costs().validate();
    ObsConfig cfg = o.obs();

    if (explore_cmd->parsed()) {
      r.command = "explore";
      Workload w = parse_workload(read_file(workload_path));
      r.inputs = o.echo();
      r.inputs["workload"] = workload_path;
      r.inputs["arch"] = arch;
      LtsCore lts = build_lts(w, arch, o);
      r.stats = {{"states", lts.num_states()},
                 {"edges", lts.num_edges()},
                 {"reconf_skipped_incoherent", lts.reconf_skipped}};
      r.verdict = {{"dumped", true}};
      result.output = o.report_format() == ReportFormat::json
                          ? lts_to_json(lts).dump(2) + "\n"
                          : export_lts_text(lts);
      return finish(0);
    }

    if (races_cmd->parsed()) {
      r.command = "races";
      Workload w = parse_workload(read_file(workload_path));
      r.inputs = o.echo();
      r.inputs["workload"] = workload_path;
      ExploreOptions opt{o.depth, o.state_cap, o.costs()};
      auto races = detect_races(w, opt);
      json list = json::array();
      for (const auto& [state, wit] : races) {
        RefMachine machine(w, o.costs());
        list.push_back({{"state", machine.label(state)},
                        {"thread_a", wit.thread_a},
                        {"thread_b", wit.thread_b},
                        {"var", wit.var},
                        {"kind_a", wit.kind_a == AccessKind::write ? "write" : "read"},
                        {"kind_b", wit.kind_b == AccessKind::write ? "write" : "read"}});
      }
      if (!races.empty()) r.verdict = {{"racy", true}, {"witnesses", list}};
      r.stats = {{"racy_states", races.size()}};
      return finish(races.empty() ? 0 : 1);
    }

    if (drf_cmd->parsed()) {
      r.command = "drf";
      Workload w = parse_workload(read_file(workload_path));
      r.inputs = o.echo();
      r.inputs["workload"] = workload_path;
      ExploreOptions opt{o.depth, o.state_cap, o.costs()};
      DrfResult res = is_drf(w, Clustering::smp(w.num_cores), opt);
      r.verdict = {{"drf", res.drf}};
      if (res.witness) {
        r.verdict["witness"] = {
            {"thread_a", res.witness->thread_a},
            {"thread_b", res.witness->thread_b},
            {"var", res.witness->var},
            {"kind_a", res.witness->kind_a == AccessKind::write ? "write" : "read"},
            {"kind_b", res.witness->kind_b == AccessKind::write ? "write" : "read"}};
      }
      r.stats = {{"states", res.states_explored}};
      return finish(res.drf ? 0 : 1);
    }

    if (conform_cmd->parsed()) {
      r.command = "conform";
      Workload w = parse_workload(read_file(workload_path));
      r.inputs = o.echo();
      r.inputs["workload"] = workload_path;
      r.inputs["arch"] = arch;
      r.inputs["against"] = against;
      r.inputs["bidirectional"] = bidirectional;
      LtsCore subject = build_lts(w, arch, o);
      LtsCore baseline = build_lts(w, against, o);
      ConformanceVerdict fwd = check_conformance(subject, baseline, cfg, o.trace_cap);
      bool ok = fwd.conforms;
      r.verdict = {{"conforms", fwd.conforms},
                   {"checked_traces", fwd.checked_traces}};
      if (fwd.counterexample) {
        r.counterexample = trace_to_json(*fwd.counterexample, cfg);
      }
      if (bidirectional) {
        ConformanceVerdict rev = check_conformance(baseline, subject, cfg, o.trace_cap);
        r.verdict["reverse_conforms"] = rev.conforms;
        r.verdict["reverse_checked_traces"] = rev.checked_traces;
        if (!rev.conforms && !fwd.counterexample && rev.counterexample) {
          r.counterexample = trace_to_json(*rev.counterexample, cfg);
        }
        ok = ok && rev.conforms;
      }
      r.stats = {{"subject_states", subject.num_states()},
                 {"baseline_states", baseline.num_states()},
                 {"reconf_skipped_incoherent", subject.reconf_skipped}};
      return finish(ok ? 0 : 1);
    }

    if (reduct_cmd->parsed()) {
      r.command = "reduct";
      Workload w = parse_workload(read_file(workload_path));
      r.inputs = o.echo();
      r.inputs["workload"] = workload_path;
      r.inputs["arch"] = arch;
      Clustering q = parse_clustering(arch, w.num_cores);
      ImplLts lts = explore_impl(w, q, impl_options(o, w.num_cores));
      std::uint64_t coherent = 0, incoherent = 0, mismatches = 0, cycles = 0;
      for (const auto& s : lts.states) {
        if (!is_coherent(s)) {
          ++incoherent;
          continue;
        }
        ++coherent;
        RefState closed = reduct(s);
        SystemClosure closure = system_only_closure(s);
        if (closure.has_cycle) ++cycles;
        bool match = closure.normal_forms.size() == 1;
        if (match) {
          const ImplState& nf = closure.normal_forms.front();
          bool caches_empty = true;
          for (const auto& c : nf.caches) caches_empty &= c.empty();
          match = caches_empty && nf.store == closed.store;
        }
        if (!match) ++mismatches;
      }
      r.verdict = {{"coherent_states", coherent},
                   {"incoherent_states", incoherent},
                   {"reduct_mismatches", mismatches},
                   {"system_cycles_from_coherent", cycles}};
      r.stats = {{"states", lts.states.size()}};
      return finish(mismatches == 0 && cycles == 0 ? 0 : 1);
    }

    if (reconf_cmd->parsed()) {
      r.command = "reconf-sim";
      Workload w = parse_workload(read_file(workload_path));
      r.inputs = o.echo();
      r.inputs["workload"] = workload_path;
      r.inputs["from"] = from_arch;
      r.inputs["at"] = at_step;
      r.inputs["to"] = to_arch;
      Clustering q = parse_clustering(from_arch, w.num_cores);
      ImplExploreOptions opt = impl_options(o, w.num_cores);
      ReconfEvent ev;
      ev.at_step = at_step;
      ev.target = parse_clustering(to_arch, w.num_cores);
      opt.events.push_back(ev);
      ImplLts lts = explore_impl(w, q, opt);
      std::uint64_t reconf_edges = 0, reduct_mismatches = 0;
      for (std::size_t i = 0; i < lts.core.num_states(); ++i) {
        for (const auto& e : lts.core.adj[i]) {
          if (e.action.kind != ActionKind::reconf) continue;
          ++reconf_edges;
          if (reduct(lts.states[i]).store != reduct(lts.states[e.dst]).store) {
            ++reduct_mismatches;
          }
        }
      }
      r.verdict = {{"reconf_edges", reconf_edges},
                   {"reduct_preserved", reduct_mismatches == 0},
                   {"skipped_incoherent", lts.core.reconf_skipped}};
      r.stats = {{"states", lts.core.num_states()}, {"edges", lts.core.num_edges()}};
      return finish(reconf_edges > 0 && reduct_mismatches == 0 ? 0 : 1);
    }

    if (cost_cmd->parsed()) {
      r.command = "cost";
      Trace t = load_trace(trace_path, o.costs());
      r.inputs = o.echo();
      r.inputs["trace"] = trace_path;
      r.verdict = {{"total_cost", trace_cost(t, o.costs())},
                   {"actions", t.size()},
                   {"trace", trace_to_json(t, cfg)}};
      return finish(0);
    }

    if (amortise_cmd->parsed()) {
      r.command = "amortise";
      Workload w = parse_workload(read_file(workload_path));
      r.inputs = o.echo();
      r.inputs["workload"] = workload_path;
      r.inputs["arch1"] = arch;
      r.inputs["arch2"] = arch2;
      LtsCore lhs = build_lts(w, arch, o);
      LtsCore rhs = build_lts(w, arch2, o);
      AmortisedVerdict v =
          amortised_compare(lhs, rhs, o.costs(), o.credit_cap, cfg, o.state_cap);
      const char* name = v.result == AmortisedResult::more_efficient
                             ? "more_efficient"
                             : v.result == AmortisedResult::not_more_efficient
                                   ? "not_more_efficient"
                                   : "inconclusive";
      r.verdict = {{"result", name},
                   {"min_credit", v.min_credit},
                   {"pairs_explored", v.pairs_explored}};
      if (v.result == AmortisedResult::inconclusive) r.verdict["bound"] = v.bound;
      if (!v.witness.empty()) {
        json steps = json::array();
        for (const auto& st : v.witness) {
          json js = {{"side", st.side},
                     {"challenge", st.challenge.to_text()},
                     {"challenge_cost", st.challenge_cost},
                     {"credit_before", st.credit_before},
                     {"credit_after", st.credit_after}};
          if (st.response) js["response"] = trace_to_json(*st.response, cfg);
          steps.push_back(std::move(js));
        }
        r.verdict["witness"] = std::move(steps);
      }
      r.stats = {{"lhs_states", lhs.num_states()}, {"rhs_states", rhs.num_states()}};
      int code = v.result == AmortisedResult::more_efficient
                     ? 0
                     : v.result == AmortisedResult::not_more_efficient ? 1 : 3;
      return finish(code);
    }

    if (breakeven_cmd->parsed()) {
      r.command = "breakeven";
      Trace t = load_trace(trace_path, o.costs());
      r.inputs = o.echo();
      r.inputs["trace"] = trace_path;
      BreakevenReport b = breakeven_report(t, o.costs());
      r.verdict = {{"deferred_writes", b.deferred_writes},
                   {"cheap_ops", b.cheap_ops},
                   {"additional_cheap_ops", b.additional_cheap_ops},
                   {"savings", b.savings},
                   {"flush_overhead", b.flush_overhead},
                   {"credit", b.credit},
                   {"net", b.net},
                   {"breakeven_count", b.breakeven_count},
                   {"cleared", b.cleared}};
      return finish(b.cleared ? 0 : 1);
    }
  } catch (const ParseError& e) {
    r.error = e.what();
    return finish(2);
  } catch (const ResourceLimit& e) {
    r.error = e.what();
    return finish(3);
  } catch (const IncoherentError& e) {
    r.error = e.what();
    return finish(1);
  } catch (const std::invalid_argument& e) {
    r.error = e.what();
    return finish(2);
  } catch (const std::out_of_range& e) {
    r.error = e.what();
    return finish(2);
  }

  r.error = "no subcommand";
  return finish(2);
}

}  // namespace morphsim
