#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "isovig/dynamics.hpp"
#include "isovig/graph.hpp"
#include "isovig/netgen.hpp"
#include "isovig/rng.hpp"
#include "support/oracles.hpp"
#include "support/stats.hpp"

using namespace isovig;
using namespace isovig::dynamics;

namespace isovig::dynamics {
struct StateProbe {
  static void bump_inf_nbrs(SystemState& st, std::uint32_t v) { st.inf_nbrs_[v] += 1; }
  static void bump_tree(SystemState& st, std::uint32_t v) {
    st.tree_.set(v, st.tree_.get(v) + 0.5);
  }
};
}  // namespace isovig::dynamics

namespace {

// Replays the event list from the initial state, checking that every
// transition is legal under the variant's rules, and returns the final state.
std::vector<std::int8_t> replay(const Graph& g, const Trajectory& tr, Variant variant) {
  std::vector<std::int8_t> s = tr.initial_state;
  double last_t = 0.0;
  for (const auto& ev : tr.events) {
    REQUIRE(ev.t > last_t);
    last_t = ev.t;
    REQUIRE(s[ev.v] == ev.from);
    std::uint32_t inf = 0, healthy = 0;
    for (std::uint32_t w : g.adj[ev.v]) {
      if (s[w] == 1) ++inf;
      if (s[w] == 0) ++healthy;
    }
    if (ev.from == 0 && ev.to == 1) {
      REQUIRE(inf > 0);
    } else if (ev.from == 1 && ev.to == 0) {
      // always allowed
    } else if (ev.from == 1 && ev.to == -1) {
      REQUIRE(variant != Variant::classical);
      if (variant == Variant::vigilance) REQUIRE(healthy > 0);
    } else if (ev.from == 0 && ev.to == -1) {
      REQUIRE(variant == Variant::comparison);
    } else if (ev.from == -1 && ev.to == 0) {
      REQUIRE(variant != Variant::classical);
    } else {
      FAIL("illegal transition");
    }
    s[ev.v] = ev.to;
  }
  return s;
}

}  // namespace

TEST_CASE("sum tree totals and proportional sampling") {
  SumTree tree(5);
  const double w[5] = {0.5, 0.0, 2.0, 1.0, 0.25};
  for (std::size_t i = 0; i < 5; ++i) tree.set(i, w[i]);
  CHECK(tree.total() == doctest::Approx(3.75).epsilon(1e-12));
  CHECK(tree.get(2) == 2.0);

  // Prefix-sum boundaries land on the right leaves.
  CHECK(tree.sample(0.0) == 0);
  CHECK(tree.sample(0.49) == 0);
  CHECK(tree.sample(0.5) == 2);  // leaf 1 has zero weight
  CHECK(tree.sample(2.49) == 2);
  CHECK(tree.sample(2.5) == 3);
  CHECK(tree.sample(3.5) == 4);
  CHECK(tree.sample(std::nextafter(3.75, 0.0)) == 4);

  tree.set(2, 0.0);
  CHECK(tree.total() == doctest::Approx(1.75).epsilon(1e-12));
  CHECK(tree.sample(0.6) == 3);

  SumTree empty(3);
  CHECK_THROWS_AS(empty.sample(0.0), std::logic_error);
}

TEST_CASE("variant names round-trip") {
  for (Variant v : {Variant::classical, Variant::isolation, Variant::vigilance,
                    Variant::comparison})
    CHECK(variant_from_name(variant_name(v)) == v);
  CHECK_THROWS_AS(variant_from_name("sis"), std::invalid_argument);
}

TEST_CASE("aggregate rates on reference configurations") {
  SUBCASE("single edge, isolation") {
    const Graph g = make_path(2);
    const ModelParams p{Variant::isolation, 2.0, 3.0};
    SystemState st(g, {1, 0}, p);
    const RateTable r = total_rates(st, p);
    CHECK(r.infection == 2.0);
    CHECK(r.recovery == 1.0);
    CHECK(r.isolation == 3.0);
    CHECK(r.return_from_isolation == 0.0);
    CHECK(r.total() == 6.0);
  }

  SUBCASE("triangle, vigilance") {
    const Graph g = make_cycle(3);
    const ModelParams p{Variant::vigilance, 2.5, 0.75};
    SystemState st(g, {1, 0, -1}, p);
    const RateTable r = total_rates(st, p);
    CHECK(r.infection == 2.5);
    CHECK(r.recovery == 1.0);
    CHECK(r.isolation == 0.75);
    CHECK(r.return_from_isolation == 1.0);
  }

  SUBCASE("all healthy") {
    const Graph g = make_path(3);
    for (Variant v : {Variant::classical, Variant::isolation, Variant::vigilance}) {
      const ModelParams p{v, 1.5, 2.0};
      SystemState st(g, {0, 0, 0}, p);
      CHECK(total_rates(st, p).total() == 0.0);
      CHECK(st.absorbed());
    }
    const ModelParams p{Variant::comparison, 1.5, 2.0};
    SystemState st(g, {0, 0, 0}, p);
    const RateTable r = total_rates(st, p);
    CHECK(r.isolation == 2.0 * 3);
    CHECK(r.total() == 6.0);
  }

  SUBCASE("both endpoints infected, vigilance") {
    const Graph g = make_path(2);
    const ModelParams p{Variant::vigilance, 4.0, 9.0};
    SystemState st(g, {1, 1}, p);
    const RateTable r = total_rates(st, p);
    CHECK(r.total() == 2.0);  // no healthy neighbours, recoveries only
  }
}

TEST_CASE("rates match a per-vertex recount on every small graph and state") {
  // Dyadic parameters keep both sides exactly representable, so equality is
  // exact rather than approximate.
  const double lambda = 2.5, alpha = 0.75;
  for (std::uint32_t n = 1; n <= 4; ++n) {
    const auto graphs = oracle::all_labeled_graphs(n);
    const auto states = oracle::all_states(n);
    for (const auto& g : graphs) {
      for (const auto& s : states) {
        for (Variant v : {Variant::classical, Variant::isolation, Variant::vigilance,
                          Variant::comparison}) {
          const ModelParams p{v, lambda, alpha};
          SystemState st(g, s, p);
          const RateTable got = total_rates(st, p);
          const auto want = oracle::naive_rates(g, s, p);
          REQUIRE(got.infection == want.infection);
          REQUIRE(got.recovery == want.recovery);
          REQUIRE(got.isolation == want.isolation);
          REQUIRE(got.return_from_isolation == want.return_from_isolation);
          REQUIRE(st.count_si_edges() == want.si_edges);
          REQUIRE(st.audit());

          // The indexed per-vertex total agrees with the class totals.
          REQUIRE(st.indexed_total_rate() ==
                  doctest::Approx(got.total()).epsilon(1e-12));

          if (v == Variant::vigilance && st.count_infected() > 0) {
            const double up = got.infection;
            const double move = got.infection + got.recovery + got.isolation;
            if (move > 0.0)
              REQUIRE(up / move <= lambda / (lambda + alpha) + 1e-15);
          }
        }
      }
    }
  }
}

TEST_CASE("audit detects corrupted counters") {
  const Graph g = make_cycle(5);
  const ModelParams p{Variant::isolation, 1.0, 0.5};
  SystemState st(g, {1, 0, 1, -1, 0}, p);
  REQUIRE(st.audit());
  StateProbe::bump_inf_nbrs(st, 1);
  CHECK(!st.audit());

  SystemState st2(g, {1, 0, 1, -1, 0}, p);
  StateProbe::bump_tree(st2, 4);
  CHECK(!st2.audit());
}

TEST_CASE("audit passes on arbitrary installed states") {
  Rng rng(1234);
  for (int rep = 0; rep < 50; ++rep) {
    const Graph g = netgen::sample_regular_graph(12, 3, 50 + rep);
    std::vector<std::int8_t> s(12);
    for (auto& x : s) x = static_cast<std::int8_t>(static_cast<int>(rng.below(3)) - 1);
    SystemState st(g, s, ModelParams{Variant::vigilance, 1.3, 0.7});
    CHECK(st.audit());
  }
}

TEST_CASE("single isolated vertex picks recovery or isolation at the right odds") {
  const Graph g = graph_from_edges(1, {});
  const ModelParams p{Variant::isolation, 5.0, 3.0};
  int recoveries = 0;
  const int reps = 100000;
  for (int r = 0; r < reps; ++r) {
    SystemState st(g, {1}, p);
    Rng rng(mix_seed(404, r));
    const auto ev = st.step(rng);
    REQUIRE(ev.has_value());
    REQUIRE(ev->from == 1);
    if (ev->to == 0) ++recoveries;
  }
  CHECK(std::abs(recoveries / double(reps) - 0.25) < 0.01);
}

TEST_CASE("single classical vertex only recovers, at unit rate") {
  const Graph g = graph_from_edges(1, {});
  const ModelParams p{Variant::classical, 5.0, 3.0};
  double sum_dt = 0.0;
  const int reps = 100000;
  for (int r = 0; r < reps; ++r) {
    SystemState st(g, {1}, p);
    Rng rng(mix_seed(808, r));
    const auto ev = st.step(rng);
    REQUIRE(ev.has_value());
    REQUIRE(ev->to == 0);
    sum_dt += ev->t;
    REQUIRE(st.absorbed());
    Rng rng2(1);
    CHECK(!st.step(rng2).has_value());
  }
  CHECK(std::abs(sum_dt / reps - 1.0) < 0.02);
}

TEST_CASE("run from all-healthy ends immediately") {
  const Graph g = make_cycle(4);
  for (Variant v : {Variant::classical, Variant::isolation, Variant::vigilance,
                    Variant::comparison}) {
    const auto tr = run(g, {0, 0, 0, 0}, ModelParams{v, 2.0, 1.0}, 10.0, 7);
    CHECK(!tr.censored);
    CHECK(tr.extinction_time == 0.0);
    CHECK(tr.events.empty());
    CHECK(tr.event_count == 0);
    CHECK(tr.final_infected == 0);
  }
}

TEST_CASE("two isolated recoveries: extinction is the later of two unit clocks") {
  const Graph g = make_path(2);
  const ModelParams p{Variant::classical, 0.0, 0.0};
  double sum = 0.0;
  const int reps = 100000;
  for (int r = 0; r < reps; ++r) {
    const auto tr = run(g, {1, 1}, p, 1e9, mix_seed(11, r), RecordLevel::summary);
    REQUIRE(!tr.censored);
    sum += tr.extinction_time;
  }
  CHECK(std::abs(sum / reps - 1.5) < 0.02);
}

TEST_CASE("extinction is the first emptying of the infected set") {
  // A lone infected vertex under isolation with alpha = 1 leaves state 1 at
  // rate 2, and both exits (recovery, isolation) empty the infected set, so
  // extinction time is Exp(2) with mean one half.  The isolated half of the
  // runs still carries a -1 vertex at extinction.
  const Graph g = graph_from_edges(1, {});
  const ModelParams p{Variant::isolation, 5.0, 1.0};
  double sum = 0.0;
  int isolated_finals = 0;
  const int reps = 100000;
  for (int r = 0; r < reps; ++r) {
    const auto tr = run(g, {1}, p, 1e9, mix_seed(23, r), RecordLevel::summary);
    REQUIRE(!tr.censored);
    REQUIRE(tr.final_infected == 0);
    REQUIRE(tr.event_count == 1);
    sum += tr.extinction_time;
    isolated_finals += tr.final_isolated;
  }
  CHECK(std::abs(sum / reps - 0.5) < 0.02);
  CHECK(std::abs(isolated_finals / double(reps) - 0.5) < 0.01);
}

TEST_CASE("comparison runs stop when infection dies even though rates remain") {
  const Graph g = make_path(2);
  const ModelParams p{Variant::comparison, 0.0, 4.0};
  const auto tr = run(g, {1, 0}, p, 1e9, 99);
  CHECK(!tr.censored);
  CHECK(tr.final_infected == 0);
  CHECK(tr.extinction_time > 0.0);
  REQUIRE(!tr.events.empty());
  CHECK(tr.events.back().t == tr.extinction_time);
  // The survivor may or may not have been removed, but the chain never ran
  // past the emptying event.
  for (const auto& ev : tr.events) CHECK(ev.t <= tr.extinction_time);
}

TEST_CASE("trajectories replay cleanly and the series tracks the counts") {
  const Graph g = make_cycle(10);
  for (Variant v : {Variant::classical, Variant::isolation, Variant::vigilance,
                    Variant::comparison}) {
    const ModelParams p{v, 2.0, 0.5};
    const auto tr = run(g, all_infected(10), p, 40.0, 1000 + int(v));
    REQUIRE(tr.initial_state == all_infected(10));
    const auto final_state = replay(g, tr, v);

    std::uint32_t inf = 0, iso = 0;
    for (auto s : final_state) {
      if (s == 1) ++inf;
      if (s == -1) ++iso;
    }
    CHECK(inf == tr.final_infected);
    CHECK(iso == tr.final_isolated);
    CHECK(tr.event_count == tr.events.size());

    // Series: one point per event plus the initial one, counts in lockstep.
    REQUIRE(tr.series.size() == tr.events.size() + 1);
    CHECK(tr.series.front().t == 0.0);
    CHECK(tr.series.front().infected == 10);
    std::vector<std::int8_t> s = tr.initial_state;
    for (std::size_t k = 0; k < tr.events.size(); ++k) {
      s[tr.events[k].v] = tr.events[k].to;
      std::uint32_t i2 = 0, a2 = 0;
      for (auto x : s) {
        if (x == 1) ++i2;
        if (x == -1) ++a2;
      }
      REQUIRE(tr.series[k + 1].t == tr.events[k].t);
      REQUIRE(tr.series[k + 1].infected == i2);
      REQUIRE(tr.series[k + 1].isolated == a2);
    }

    if (!tr.censored) {
      CHECK(tr.final_infected == 0);
      CHECK(tr.series.back().infected == 0);
      CHECK(tr.events.back().t == tr.extinction_time);
      CHECK(tr.t_end == tr.extinction_time);
      // The infected count is positive strictly before extinction.
      for (std::size_t k = 0; k + 1 < tr.series.size(); ++k)
        CHECK(tr.series[k].infected > 0);
    } else {
      CHECK(tr.t_end == 40.0);
    }
  }
}

TEST_CASE("a longer cap extends the same event sequence") {
  const Graph g = make_star(10);
  const ModelParams p{Variant::vigilance, 1.5, 0.3};
  const auto short_run = run(g, all_infected(11), p, 2.0, 5151);
  const auto long_run = run(g, all_infected(11), p, 50.0, 5151);
  REQUIRE(short_run.events.size() <= long_run.events.size());
  for (std::size_t k = 0; k < short_run.events.size(); ++k) {
    CHECK(short_run.events[k].t == long_run.events[k].t);
    CHECK(short_run.events[k].v == long_run.events[k].v);
    CHECK(short_run.events[k].to == long_run.events[k].to);
  }
  if (!short_run.censored) {
    CHECK(short_run.events.size() == long_run.events.size());
  }
}

TEST_CASE("capped step declines without advancing") {
  const Graph g = make_path(2);
  const ModelParams p{Variant::isolation, 1.0, 1.0};
  SystemState st(g, {1, 1}, p);
  Rng rng(3);
  const auto none = st.step(rng, 1e-12);
  CHECK(!none.has_value());
  CHECK(st.time() == 0.0);
  CHECK(st.count_infected() == 2);
  const auto ev = st.step(rng);
  REQUIRE(ev.has_value());
  CHECK(ev->t > 1e-12);
}

TEST_CASE("runs are reproducible per seed and sensitive to it") {
  const Graph g = make_cycle(8);
  const ModelParams p{Variant::isolation, 1.2, 0.4};
  const auto a = run(g, all_infected(8), p, 30.0, 42);
  const auto b = run(g, all_infected(8), p, 30.0, 42);
  const auto c = run(g, all_infected(8), p, 30.0, 43);
  REQUIRE(a.events.size() == b.events.size());
  for (std::size_t k = 0; k < a.events.size(); ++k) {
    CHECK(a.events[k].t == b.events[k].t);
    CHECK(a.events[k].v == b.events[k].v);
  }
  bool differs = (a.events.size() != c.events.size());
  for (std::size_t k = 0; !differs && k < a.events.size(); ++k)
    differs = (a.events[k].t != c.events[k].t) || (a.events[k].v != c.events[k].v);
  CHECK(differs);
}

TEST_CASE("record levels agree on the summary and differ in retention") {
  const Graph g = make_cycle(12);
  const ModelParams p{Variant::vigilance, 2.0, 0.5};
  const auto full = run(g, all_infected(12), p, 25.0, 77, RecordLevel::full);
  const auto series = run(g, all_infected(12), p, 25.0, 77, RecordLevel::series);
  const auto summary = run(g, all_infected(12), p, 25.0, 77, RecordLevel::summary);

  for (const auto* tr : {&series, &summary}) {
    CHECK(tr->event_count == full.event_count);
    CHECK(tr->censored == full.censored);
    CHECK(tr->extinction_time == full.extinction_time);
    CHECK(tr->final_infected == full.final_infected);
    CHECK(tr->final_isolated == full.final_isolated);
  }
  CHECK(series.events.empty());
  REQUIRE(series.series.size() == full.series.size());
  CHECK(series.series.back().t == full.series.back().t);
  CHECK(summary.events.empty());
  CHECK(summary.series.empty());
}
