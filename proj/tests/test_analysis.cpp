#include <doctest.h>

#include <random>

#include "morphsim/analysis.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace morphsim;

namespace {

ImplState blank_state(std::uint32_t cores, const Clustering& q,
                      std::map<std::string, std::int64_t> store) {
  Workload w;
  w.num_cores = cores;
  w.threads.resize(cores);
  w.init_store = std::move(store);
  ImplMachine m(w, q);
  return m.initial_state();
}

}  // namespace

TEST_CASE("view falls back to the store and respects aliasing") {
  ImplState s = blank_state(2, Clustering::smp(2), {{"x", 0}});
  CHECK(view(s, 0, "x") == 0);
  CHECK(view(s, 1, "x") == 0);

  s.caches[0]["x"] = CacheEntry{9, true};
  CHECK(view(s, 0, "x") == 9);
  CHECK(view(s, 1, "x") == 0);
  CHECK_THROWS_AS(view(s, 0, "nope"), std::out_of_range);

  ImplState shared = blank_state(2, Clustering::cmp(2), {{"x", 0}});
  shared.caches[0]["x"] = CacheEntry{3, false};
  CHECK(view(shared, 0, "x") == 3);
  CHECK(view(shared, 1, "x") == 3);
}

TEST_CASE("coherence needs agreeing dirty copies") {
  ImplState s = blank_state(2, Clustering::smp(2), {{"x", 0}});
  CHECK(is_coherent(s));  // empty caches

  s.caches[0]["x"] = CacheEntry{5, false};
  s.caches[1]["x"] = CacheEntry{7, false};
  CHECK(is_coherent(s));  // clean copies may disagree

  s.caches[0]["x"] = CacheEntry{1, true};
  s.caches[1]["x"] = CacheEntry{1, true};
  CHECK(is_coherent(s));

  s.caches[1]["x"] = CacheEntry{2, true};
  CHECK_FALSE(is_coherent(s));
  CoherenceReport r = coherence_report(s);
  CHECK_FALSE(r.ok);
  REQUIRE(r.violations.count("x") == 1);
  CHECK(r.violations.at("x").size() == 2);
}

TEST_CASE("consistency requires clean copies matching the store") {
  ImplState s = blank_state(2, Clustering::smp(2), {{"x", 4}});
  CHECK(is_consistent(s));
  s.caches[0]["x"] = CacheEntry{4, false};
  CHECK(is_consistent(s));
  s.caches[1]["x"] = CacheEntry{5, false};
  CHECK_FALSE(is_consistent(s));
  s.caches[1]["x"] = CacheEntry{4, true};
  CHECK_FALSE(is_consistent(s));
  CHECK_FALSE(consistency_report(s).ok);
}

TEST_CASE("consistency implies coherence on random small states") {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> val(0, 2), mode(0, 3);
  for (int round = 0; round < 500; ++round) {
    ImplState s = blank_state(3, Clustering::smp(3), {{"x", 1}, {"y", 2}});
    for (auto& cache : s.caches) {
      for (const char* var : {"x", "y"}) {
        switch (mode(rng)) {
          case 0:
            break;  // absent
          case 1:
            cache[var] = CacheEntry{val(rng), false};
            break;
          default:
            cache[var] = CacheEntry{val(rng), true};
            break;
        }
      }
    }
    if (is_consistent(s)) CHECK(is_coherent(s));
    CHECK(is_coherent(s) == coherence_report(s).ok);
    CHECK(is_consistent(s) == consistency_report(s).ok);
  }
}

TEST_CASE("reduct closed form: dirty wins, clean does not") {
  ImplState s = blank_state(1, Clustering::smp(1), {{"x", 0}});
  CHECK(reduct(s).store.at("x") == 0);  // empty caches: store unchanged

  s.caches[0]["x"] = CacheEntry{1, true};
  CHECK(reduct(s).store.at("x") == 1);

  s.caches[0]["x"] = CacheEntry{5, false};
  CHECK(reduct(s).store.at("x") == 0);

  ImplState bad = blank_state(2, Clustering::smp(2), {{"x", 0}});
  bad.caches[0]["x"] = CacheEntry{1, true};
  bad.caches[1]["x"] = CacheEntry{2, true};
  CHECK_THROWS_AS(reduct(bad), IncoherentError);
}

TEST_CASE("reduct equals the protocol normal form on reachable states") {
  Workload w = testing::load_workload("wrr.wl");
  ImplLts lts = explore_impl(w, Clustering::cmp(1));
  for (const auto& s : lts.states) {
    REQUIRE(is_coherent(s));
    RefState closed = reduct(s);
    auto nf = oracle::system_normal_forms(s);
    REQUIRE(nf.normal_forms.size() == 1);
    const ImplState& n = *nf.normal_forms.begin();
    CHECK(n.store == closed.store);
    for (const auto& c : n.caches) CHECK(c.empty());
  }
}

TEST_CASE("data-race freedom over the corpus") {
  CHECK(is_drf(testing::load_workload("w2.wl"), Clustering::smp(2)).drf);
  auto res = is_drf(testing::load_workload("w1.wl"), Clustering::smp(2));
  CHECK_FALSE(res.drf);
  REQUIRE(res.witness.has_value());
  CHECK(res.witness->var == "x");

  Workload solo = parse_workload("cores 1\ninit x=0\nthread 0:\n  write x 1\n  read x\n");
  CHECK(is_drf(solo, Clustering::smp(1)).drf);
}

TEST_CASE("observable projection drops internal actions") {
  ObsConfig cfg;
  CostParams p;
  Trace t = cost_trace({make_tau(0), make_store_update(0, "x"), make_evict(0, "x")}, p);
  CHECK(observable_projection(t, cfg).empty());

  Trace t2 = cost_trace({make_local_write("x", 1, 0), make_store_update(0, "x"),
                         make_store_read("x", 1, 1)},
                        p);
  auto proj = observable_projection(t2, cfg);
  REQUIRE(proj.size() == 2);
  CHECK(proj[0] == make_local_write("x", 1, 0));
  CHECK(proj[1] == make_store_read("x", 1, 1));

  Trace t3 = cost_trace({make_ref_write("x", 1, 0), make_ref_read("x", 1, 1)}, p);
  CHECK(observable_projection(t3, cfg).size() == 2);

  // Locks can be folded into the internal class.
  Trace t4 = cost_trace({make_lock_acquire("l", 0)}, p);
  CHECK(observable_projection(t4, cfg).size() == 1);
  ObsConfig silent{false};
  CHECK(observable_projection(t4, silent).empty());
}

TEST_CASE("functional equivalence matches class, variable, value, thread") {
  ObsConfig cfg;
  CHECK(functionally_equivalent(make_local_read("x", 1, 0), make_ref_read("x", 1, 0), cfg));
  CHECK(functionally_equivalent(make_store_read("x", 1, 0), make_pull_read("x", 1, 0), cfg));
  CHECK_FALSE(functionally_equivalent(make_local_write("x", 1, 0),
                                      make_ref_write("x", 1, 1), cfg));
  CHECK_FALSE(functionally_equivalent(make_local_read("x", 1, 0),
                                      make_local_read("x", 2, 0), cfg));
  CHECK_FALSE(functionally_equivalent(make_local_read("x", 1, 0),
                                      make_local_write("x", 1, 0), cfg));
  CHECK(functionally_equivalent(make_evict(0, "x"), make_tau(1), cfg));
  CHECK(functionally_equivalent(make_reconf("2(1,1)", "1(2)"), make_tau(0), cfg));
  CHECK(functionally_equivalent(make_lock_acquire("l", 0), make_lock_acquire("l", 0), cfg));
  CHECK_FALSE(functionally_equivalent(make_lock_acquire("l", 0),
                                      make_lock_release("l", 0), cfg));
}

TEST_CASE("an LTS conforms to itself") {
  Workload w = testing::load_workload("sb.wl");
  RefLts ref = explore_ref(w);
  ObsConfig cfg;
  ConformanceVerdict v = check_conformance(ref.core, ref.core, cfg);
  CHECK(v.conforms);
  CHECK_FALSE(v.counterexample.has_value());
  CHECK(v.checked_traces > 0);
}

TEST_CASE("store buffering on private caches fails conformance with (0,0)") {
  Workload w = testing::load_workload("sb.wl");
  ObsConfig cfg;
  ImplLts impl = explore_impl(w, Clustering::smp(2));
  RefLts ref = explore_ref(w);
  ConformanceVerdict v = check_conformance(impl.core, ref.core, cfg);
  REQUIRE_FALSE(v.conforms);
  REQUIRE(v.counterexample.has_value());
  // The least missing trace reads both variables at zero.
  bool ry0 = false, rx0 = false;
  for (const auto& step : *v.counterexample) {
    if (class_of(step.action, cfg) == ActionClass::read) {
      if (step.action.var == "y" && step.action.value == 0 && step.action.actor == 0)
        ry0 = true;
      if (step.action.var == "x" && step.action.value == 0 && step.action.actor == 1)
        rx0 = true;
    }
  }
  CHECK(ry0);
  CHECK(rx0);
}

TEST_CASE("store buffering on the shared cache matches the reference both ways") {
  Workload w = testing::load_workload("sb.wl");
  ObsConfig cfg;
  ImplLts impl = explore_impl(w, Clustering::cmp(2));
  RefLts ref = explore_ref(w);
  CHECK(check_conformance(impl.core, ref.core, cfg).conforms);
  CHECK(check_conformance(ref.core, impl.core, cfg).conforms);
}

TEST_CASE("deadlocked schedules are maximal traces") {
  // Self-deadlock: the second acquire never fires.
  Workload w = parse_workload("cores 1\ninit\nlocks l\nthread 0:\n  lock l\n  lock l\n");
  RefLts ref = explore_ref(w);
  ObsConfig cfg;
  TraceLanguage lang = obs_trace_language(ref.core, cfg);
  REQUIRE(lang.traces.size() == 1);
  CHECK(lang.traces.begin()->size() == 1);  // just the first acquire
}

TEST_CASE("trace-set cap raises a resource limit") {
  Workload w = testing::load_workload("sb.wl");
  RefLts ref = explore_ref(w);
  ObsConfig cfg;
  CHECK_THROWS_AS(obs_trace_language(ref.core, cfg, 2), ResourceLimit);
}

TEST_CASE("reconf edges preserve reducts") {
  Workload w = testing::load_workload("w2.wl");
  ImplExploreOptions opt;
  opt.reconf_anywhere = true;
  opt.anywhere_targets = {Clustering::smp(2), Clustering::cmp(2)};
  ImplLts lts = explore_impl(w, Clustering::smp(2), opt);
  bool saw = false;
  for (std::size_t i = 0; i < lts.core.num_states(); ++i) {
    for (const auto& e : lts.core.adj[i]) {
      if (e.action.kind != ActionKind::reconf) continue;
      saw = true;
      CHECK(reduct(lts.states[i]).store == reduct(lts.states[e.dst]).store);
    }
  }
  CHECK(saw);
}

TEST_CASE("drf verdicts agree with the brute-force oracle") {
  for (const char* name : {"sb.wl", "w1.wl", "w2.wl", "w3.wl"}) {
    CAPTURE(name);
    Workload w = testing::load_workload(name);
    auto lib = is_drf(w, Clustering::smp(w.num_cores));
    auto orc = oracle::drf_oracle(w);
    CHECK(lib.drf == orc.drf);
    if (!lib.drf) {
      REQUIRE(lib.witness.has_value());
      CHECK(orc.witnesses.count({lib.witness->thread_a, lib.witness->thread_b,
                                 lib.witness->var}) == 1);
    }
  }
}
