#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "dttgf/geometry.hpp"
#include "dttgf/merge.hpp"
#include "dttgf/sampling.hpp"
#include "dttgf/subsolver.hpp"
#include "dttgf/warmup.hpp"

using namespace dttgf;

namespace {

template <typename Fn>
ErrorKind kind_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::invariant;
}

Heatmap filtered_heatmap(const TspInstance& inst, std::uint64_t seed) {
  const auto dt = delaunay_triangulate(inst.points());
  const auto ex = extract_subgraphs(dt, inst, {});
  const auto res = solve_all(ex.subgraphs, inst, SolverSpec{},
                             Stream::for_purpose(seed, Purpose::subsolver));
  return apply_dt_filter(merge_results(ex.subgraphs, res, inst.size()), dt);
}

// Hexagon-ish instance: tours over six points with known edge sets.
TspInstance six() {
  return TspInstance({{0.1, 0.1}, {0.5, 0.0}, {0.9, 0.1}, {0.9, 0.9}, {0.5, 1.0}, {0.1, 0.9}});
}

}  // namespace

TEST(Fitness, LargestProductWins) {
  const TspInstance inst({{0, 0}, {0.2, 0}, {0.2, 0.3}});
  Heatmap P(3);
  P.set(0, 1, 0.5);  // 0.5 * 0.2 = 0.10
  P.set(1, 2, 0.4);  // 0.4 * 0.3 = 0.12
  EXPECT_EQ(fitness_argmax(P, inst, {}), (Edge{1, 2}));
  EXPECT_EQ(fitness_argmax(P, inst, {{1, 2}}), (Edge{0, 1}));
  EXPECT_EQ(fitness_argmax(P, inst, {{1, 2}, {0, 1}}), std::nullopt);
}

TEST(Fitness, TieGoesToSmallerEdge) {
  const TspInstance inst({{0, 0}, {0.5, 0}, {0.5, 0.5}, {0, 0.5}});
  Heatmap P(4);
  P.set(2, 3, 0.6);
  P.set(0, 1, 0.6);
  P.set(1, 2, 0.6);
  EXPECT_EQ(fitness_argmax(P, inst, {}), (Edge{0, 1}));
}

TEST(Backprop, DeltaFormula) {
  EXPECT_NEAR(backprop_delta(10.5, 10.0, 0.1), 0.1 * (std::exp(0.05) - 1.0), 1e-15);
  EXPECT_NEAR(backprop_delta(10.5, 10.0, 0.1), 0.005127, 5e-7);
  EXPECT_EQ(backprop_delta(3.0, 3.0, 0.1), 0.0);
  EXPECT_NEAR(backprop_delta(10.5, 10.0, 0.1, WarmupDenominator::baseline),
              0.1 * (std::exp(0.5 / 10.5) - 1.0), 1e-15);
  EXPECT_LT(backprop_delta(10.0, 10.5, 0.1), 0.0);
  EXPECT_EQ(kind_of([] { backprop_delta(1.0, 1.0, 0.0); }), ErrorKind::domain);
  EXPECT_EQ(kind_of([] { backprop_delta(0.0, 1.0, 0.1); }), ErrorKind::domain);
}

TEST(Backprop, EqualLengthsLeaveMapUnchanged) {
  const auto inst = six();
  Heatmap P(6);
  P.set(0, 1, 0.3);
  P.set(2, 3, 0.7);
  const Tour t{{0, 1, 2, 3, 4, 5}};
  Heatmap Q = P;
  backprop_update(Q, t, Tour{{3, 4, 5, 0, 1, 2}}, 0.1, inst);
  EXPECT_EQ(Q, P);
}

TEST(Backprop, ClassifiesEdgesByTour) {
  const auto inst = six();
  const Tour tb{{0, 1, 2, 3, 4, 5}};   // perimeter
  const Tour td{{0, 1, 2, 4, 3, 5}};   // crosses: longer
  Heatmap P(6);
  for (const auto& [a, b] : tour_edges(tb)) P.set(a, b, 0.5);
  P.set(2, 4, 0.5);
  P.set(0, 3, 0.25);  // off both tours
  backprop_update(P, tb, td, 0.1, inst);
  const double delta = backprop_delta(tour_length(tb, inst), tour_length(td, inst), 0.1);
  ASSERT_LT(delta, 0.0);
  // Shared edges.
  for (Edge e : {Edge{0, 1}, Edge{1, 2}, Edge{3, 4}, Edge{0, 5}}) {
    EXPECT_EQ(P.get(e.first, e.second), 0.5);
  }
  // T_b only: alpha = +1.
  for (Edge e : {Edge{2, 3}, Edge{4, 5}}) {
    EXPECT_DOUBLE_EQ(P.get(e.first, e.second), 0.5 + delta);
  }
  // T_del only: alpha = -1.
  EXPECT_DOUBLE_EQ(P.get(2, 4), 0.5 - delta);
  EXPECT_DOUBLE_EQ(P.get(3, 5), -delta);
  EXPECT_EQ(P.get(0, 3), 0.25);
}

TEST(Backprop, OffTourEntriesBitIdenticalAndClamped) {
  const auto inst = gen_uniform(80, 3);
  Heatmap P = filtered_heatmap(inst, 3);
  Tour tb, td;
  for (NodeId i = 0; i < 80; ++i) tb.order.push_back(i);
  td = tb;
  std::reverse(td.order.begin() + 10, td.order.begin() + 50);
  const Heatmap before = P;
  backprop_update(P, tb, td, 50.0, inst);  // huge beta forces clamping
  std::set<Edge> on;
  for (const auto& e : tour_edges(tb)) on.insert(e);
  for (const auto& e : tour_edges(td)) on.insert(e);
  for (const auto& e : before.entries()) {
    if (!on.count({e.i, e.j})) {
      EXPECT_EQ(P.get(e.i, e.j), e.p);
    }
  }
  for (const auto& e : P.entries()) {
    EXPECT_GE(e.p, 0.0);
    EXPECT_LE(e.p, 1.0);
    if (!on.count({e.i, e.j})) {
      EXPECT_EQ(e.p, before.get(e.i, e.j));
    }
  }
}

TEST(Backprop, FlipSignNegates) {
  const auto inst = six();
  const Tour tb{{0, 1, 2, 3, 4, 5}}, td{{0, 1, 2, 4, 3, 5}};
  Heatmap a(6), b(6);
  a.set(2, 3, 0.5);
  b.set(2, 3, 0.5);
  backprop_update(a, tb, td, 0.1, inst);
  backprop_update(b, tb, td, 0.1, inst, WarmupDenominator::deleted, true);
  EXPECT_NEAR(a.get(2, 3) - 0.5, 0.5 - b.get(2, 3), 1e-15);
}

TEST(WarmUp, ZeroBudgetReturnsInput) {
  const auto inst = gen_uniform(60, 2);
  const Heatmap P = filtered_heatmap(inst, 2);
  WarmupParams wp;
  wp.budget = 0;
  const auto nbrs = build_neighbor_lists(inst, 10);
  const auto r = warm_up(P, inst, wp, Stream(1), nbrs);
  EXPECT_EQ(r.heatmap, P);
  EXPECT_EQ(r.iterations, 0u);
  EXPECT_EQ(r.final_length, r.initial_length);
}

TEST(WarmUp, ContractPerIteration) {
  const auto inst = gen_uniform(120, 4);
  const Heatmap P = filtered_heatmap(inst, 4);
  const auto nbrs = build_neighbor_lists(inst, 10);
  WarmupParams wp;
  wp.budget = 60;
  wp.samples = 4;
  double last = std::numeric_limits<double>::infinity();
  std::size_t calls = 0;
  const auto r = warm_up(P, inst, wp, Stream(4), nbrs, 1, [&](const WarmupStep& s) {
    ++calls;
    EXPECT_LE(s.baseline_length, last);
    last = s.baseline_length;
    EXPECT_EQ(s.accepted, s.deleted_length < s.baseline_length);
    std::set<Edge> on;
    for (const auto& e : tour_edges(*s.baseline)) on.insert(e);
    for (const auto& e : tour_edges(*s.deleted)) on.insert(e);
    for (const auto& e : s.before_backprop->entries()) {
      if (!on.count({e.i, e.j})) {
        EXPECT_EQ(s.after_backprop->get(e.i, e.j), e.p);
      }
    }
    for (const auto& e : s.after_backprop->entries()) {
      EXPECT_LE(e.p, 1.0);
      if (!on.count({e.i, e.j})) {
        EXPECT_EQ(e.p, s.before_backprop->get(e.i, e.j));
      }
    }
  });
  EXPECT_EQ(calls, r.iterations);
  EXPECT_LE(r.iterations, 60u);
  EXPECT_LE(r.final_length, r.initial_length);
  for (std::size_t k = 1; k < r.baseline_trace.size(); ++k) {
    EXPECT_LE(r.baseline_trace[k], r.baseline_trace[k - 1]);
  }
  EXPECT_DOUBLE_EQ(tour_length(r.baseline, inst), r.final_length);
}

TEST(WarmUp, TerminatesWhenSupportExhausted) {
  const auto inst = gen_uniform(30, 1);
  Heatmap P(30);
  P.set(0, 1, 0.5);
  P.set(2, 3, 0.5);
  WarmupParams wp;
  wp.budget = 1000;
  wp.samples = 2;
  wp.strict_improving = true;
  const auto r = warm_up(P, inst, wp, Stream(2), build_neighbor_lists(inst, 10));
  // Strict mode with no improvement never grows the support, so two tries suffice.
  EXPECT_LE(r.iterations, 1000u);
  EXPECT_GE(r.iterations, 2u);
}

TEST(WarmUp, DeterministicAndThreadIndependent) {
  const auto inst = gen_uniform(150, 9);
  const Heatmap P = filtered_heatmap(inst, 9);
  const auto nbrs = build_neighbor_lists(inst, 10);
  WarmupParams wp;
  wp.budget = 30;
  wp.samples = 8;
  const auto a = warm_up(P, inst, wp, Stream(3), nbrs, 1);
  const auto b = warm_up(P, inst, wp, Stream(3), nbrs, 4);
  EXPECT_EQ(a.heatmap, b.heatmap);
  EXPECT_EQ(a.baseline.order, b.baseline.order);
}

TEST(WarmUp, RegressionTwoHundredSeedZero) {
  // One-stage pipeline pieces, budget 100, beta 0.1. The final tour is the
  // better of the warmed decode and the warm-up baseline.
  const auto inst = gen_uniform(200, 0);
  const Heatmap P = filtered_heatmap(inst, 0);
  const auto nbrs = build_neighbor_lists(inst, 10);
  const auto ds = Stream::for_purpose(0, Purpose::sampling_decoder);
  const auto pre = s2opt_decode(P, inst, 16, ds, nbrs);
  WarmupParams wp;
  wp.budget = 100;
  const auto w = warm_up(P, inst, wp, Stream::for_purpose(0, Purpose::warmup), nbrs, 1, {}, pre);
  const auto post = s2opt_decode(w.heatmap, inst, 16, ds, nbrs);
  const double final_len = std::min(post.length, w.final_length);
  RecordProperty("pre", std::to_string(pre.length));
  RecordProperty("warm_baseline", std::to_string(w.final_length));
  RecordProperty("warm_decode", std::to_string(post.length));
  EXPECT_EQ(w.initial_length, pre.length);
  EXPECT_LE(final_len, pre.length);
  EXPECT_LT(w.final_length, pre.length);
}

TEST(WarmUp, ParameterErrors) {
  const auto inst = gen_uniform(20, 1);
  const auto nbrs = build_neighbor_lists(inst, 10);
  WarmupParams wp;
  wp.beta = 0.0;
  EXPECT_EQ(kind_of([&] { warm_up(Heatmap(20), inst, wp, Stream(0), nbrs); }), ErrorKind::config);
  wp.beta = 0.1;
  wp.samples = 0;
  EXPECT_EQ(kind_of([&] { warm_up(Heatmap(20), inst, wp, Stream(0), nbrs); }), ErrorKind::config);
}

TEST(WarmUp, DefaultBudget) {
  EXPECT_EQ(resolve_warmup_budget({}, 50), 50);
  EXPECT_EQ(resolve_warmup_budget({}, 5000), 200);
  WarmupParams wp;
  wp.budget = 7;
  EXPECT_EQ(resolve_warmup_budget(wp, 5000), 7);
}
