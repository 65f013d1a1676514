#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "dttgf/geometry.hpp"
#include "dttgf/merge.hpp"
#include "dttgf/sampling.hpp"
#include "dttgf/subsolver.hpp"

using namespace dttgf;

namespace {

using EdgeMap = std::map<std::pair<NodeId, NodeId>, double>;

// Straight from the definition: sum of per-subgraph values over the number of
// subgraphs holding both endpoints, with membership found by linear search.
EdgeMap naive_merge(const std::vector<SubGraph>& subs, const std::vector<SubResult>& res) {
  EdgeMap sum;
  for (std::size_t l = 0; l < subs.size(); ++l) {
    if (const auto* t = std::get_if<SubTour>(&res[l])) {
      const auto& o = t->tour.order;
      std::set<std::pair<NodeId, NodeId>> seen;
      for (std::size_t k = 0; k < o.size(); ++k) {
        NodeId a = subs[l].global(o[k]), b = subs[l].global(o[(k + 1) % o.size()]);
        if (a > b) std::swap(a, b);
        if (seen.insert({a, b}).second) sum[{a, b}] += 1.0;
      }
    } else {
      for (const auto& e : std::get<SubHeatmap>(res[l]).heatmap.entries()) {
        NodeId a = subs[l].global(e.i), b = subs[l].global(e.j);
        if (a > b) std::swap(a, b);
        sum[{a, b}] += e.p;
      }
    }
  }
  EdgeMap out;
  for (const auto& [e, s] : sum) {
    int both = 0;
    for (const auto& g : subs) {
      const auto& nd = g.nodes();
      const bool hi = std::find(nd.begin(), nd.end(), e.first) != nd.end();
      const bool hj = std::find(nd.begin(), nd.end(), e.second) != nd.end();
      both += hi && hj;
    }
    out[e] = s / both;
  }
  return out;
}

struct Case {
  TspInstance inst;
  DelaunayGraph dt;
  std::vector<SubGraph> subs;
  std::vector<SubResult> results;
};

Case make_case(std::size_t n, std::uint64_t seed, SolverKind kind, std::size_t m, int cover) {
  Case c{gen_uniform(n, seed), {}, {}, {}};
  c.dt = delaunay_triangulate(c.inst.points());
  c.subs = extract_subgraphs(c.dt, c.inst, {m, cover, 0, {}}).subgraphs;
  SolverSpec spec;
  spec.kind = kind;
  c.results = solve_all(c.subs, c.inst, spec, Stream::for_purpose(seed, Purpose::subsolver));
  return c;
}

SubGraph whole(std::size_t n) {
  std::vector<NodeId> nodes(n);
  std::iota(nodes.begin(), nodes.end(), 0);
  return SubGraph(nodes, n);
}

}  // namespace

TEST(MergeOneStage, WholeGraphIsTourIndicator) {
  const Tour t{{0, 3, 1, 4, 2, 5}};
  const std::vector<SubGraph> subs{whole(6)};
  const Heatmap P = merge_one_stage(subs, std::vector<Tour>{t}, 6);
  EXPECT_EQ(P.support_size(), 6u);
  for (const auto& [a, b] : tour_edges(t)) EXPECT_EQ(P.get(a, b), 1.0);
}

TEST(MergeOneStage, HalfWhenSelectedInOneOfTwo) {
  // Both subgraphs hold nodes 0 and 1; only the first tour uses edge (0, 1).
  const std::vector<SubGraph> subs{SubGraph({0, 1, 2, 3}, 6), SubGraph({1, 4, 0, 5}, 6)};
  // Subgraph 1 maps local 0..3 to global 1, 4, 0, 5: its tour is 1-4-0-5.
  const std::vector<Tour> tours{Tour{{0, 1, 2, 3}}, Tour{{0, 1, 2, 3}}};
  const Heatmap P = merge_one_stage(subs, tours, 6);
  EXPECT_EQ(P.get(0, 1), 0.5);
  EXPECT_EQ(P.get(1, 2), 1.0);  // only subgraph 0 holds 1 and 2
  EXPECT_EQ(P.get(1, 5), 1.0);
  EXPECT_EQ(P.get(0, 4), 1.0);
  EXPECT_EQ(P.get(0, 2), 0.0);
  EXPECT_EQ(P.support_size(), 8u);
}

TEST(MergeOneStage, ExactSubsolverSmallInstance) {
  const auto c = make_case(30, 0, SolverKind::exact, 10, 2);
  const Heatmap P = merge_results(c.subs, c.results, 30);
  const auto want = naive_merge(c.subs, c.results);
  EXPECT_EQ(P.support_size(), want.size());
  for (const auto& e : P.entries()) {
    EXPECT_GT(e.p, 0.0);
    EXPECT_LE(e.p, 1.0);
    ASSERT_TRUE(want.count({e.i, e.j}));  // positive only when some sub-tour used it
    EXPECT_EQ(e.p, want.at({e.i, e.j}));
  }
}

TEST(MergeOneStage, OneMeansUnanimous) {
  const auto c = make_case(80, 5, SolverKind::nn2opt, 15, 3);
  const Heatmap P = merge_results(c.subs, c.results, 80);
  const SelectionCounter S(c.subs, 80);
  const auto want = naive_merge(c.subs, c.results);
  for (const auto& [e, p] : want) {
    const double selected = p * static_cast<double>(S.count(e.first, e.second));
    EXPECT_LE(selected, static_cast<double>(S.count(e.first, e.second)) + 1e-9);
    EXPECT_EQ(P.get(e.first, e.second) == 1.0,
              std::lround(selected) == static_cast<long>(S.count(e.first, e.second)));
  }
}

TEST(MergeTwoStage, WholeGraphEqualsSubHeatmap) {
  Heatmap h(5);
  h.set(0, 1, 0.25);
  h.set(2, 4, 0.75);
  h.set(1, 3, 1.0);
  const std::vector<SubGraph> subs{whole(5)};
  EXPECT_EQ(merge_two_stage(subs, std::vector<Heatmap>{h}, 5), h);
}

TEST(MergeTwoStage, AverageOfTwo) {
  const std::vector<SubGraph> subs{SubGraph({0, 1, 2}, 4), SubGraph({3, 1, 0}, 4)};
  Heatmap a(3), b(3);
  a.set(0, 1, 0.8);  // global (0, 1)
  b.set(1, 2, 0.4);  // global (1, 0)
  const Heatmap P = merge_two_stage(subs, std::vector<Heatmap>{a, b}, 4);
  EXPECT_NEAR(P.get(0, 1), 0.6, 1e-15);
}

TEST(MergeTwoStage, EnsembleValuesInRange) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto c = make_case(60, seed, SolverKind::ensemble, 15, 3);
    const Heatmap P = merge_results(c.subs, c.results, 60);
    const auto want = naive_merge(c.subs, c.results);
    EXPECT_EQ(P.support_size(), want.size());
    for (const auto& e : P.entries()) {
      EXPECT_GT(e.p, 0.0);
      EXPECT_LE(e.p, 1.0);
      EXPECT_NEAR(e.p, want.at({e.i, e.j}), 1e-12);
    }
  }
}

TEST(Merge, PermutationInvariantBitIdentical) {
  for (SolverKind kind : {SolverKind::nn2opt, SolverKind::ensemble}) {
    const auto c = make_case(120, 7, kind, 20, 3);
    const Heatmap base = merge_results(c.subs, c.results, 120);
    std::vector<std::size_t> perm(c.subs.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937 g(1);
    for (int trial = 0; trial < 5; ++trial) {
      std::shuffle(perm.begin(), perm.end(), g);
      std::vector<SubGraph> s2;
      std::vector<SubResult> r2;
      for (auto k : perm) {
        s2.push_back(c.subs[k]);
        r2.push_back(c.results[k]);
      }
      EXPECT_EQ(merge_results(s2, r2, 120), base) << to_string(kind);
    }
  }
}

TEST(Merge, SelectionCountBoundsSelections) {
  const std::vector<SubGraph> subs{SubGraph({0, 1, 2}, 4)};
  // Edge (0, 3) cannot come from a subgraph missing node 3: the tour references
  // only local indices, so the count check fires on a forged heatmap instead.
  const SelectionCounter S(subs, 4);
  EXPECT_EQ(S.count(0, 1), 1u);
  EXPECT_EQ(S.count(0, 3), 0u);
}

TEST(Merge, DimensionErrors) {
  const std::vector<SubGraph> subs{SubGraph({0, 1, 2}, 4)};
  try {
    merge_one_stage(subs, std::vector<Tour>{}, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::dimension);
  }
  try {
    merge_one_stage(subs, std::vector<Tour>{Tour{{0, 1, 2}}}, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::dimension);
  }
}

TEST(DtFilter, DtSupportedIsFixedPoint) {
  const auto inst = gen_uniform(50, 2);
  const auto dt = delaunay_triangulate(inst.points());
  Heatmap P(50);
  for (std::size_t k = 0; k < dt.edges.size(); k += 2) {
    P.set(dt.edges[k].first, dt.edges[k].second, 0.1 + 0.8 * (k % 5) / 4.0);
  }
  EXPECT_EQ(apply_dt_filter(P, dt), P);
}

TEST(DtFilter, RemovesNonDtEntry) {
  const auto inst = gen_uniform(50, 2);
  const auto dt = delaunay_triangulate(inst.points());
  Heatmap P(50);
  P.set(dt.edges[0].first, dt.edges[0].second, 0.3);
  P.set(dt.edges[5].first, dt.edges[5].second, 1.0);
  NodeId a = 0, b = 1;
  while (dt.has_edge(a, b)) ++b;
  Heatmap with = P;
  with.set(a, b, 0.9);
  const Heatmap f = apply_dt_filter(with, dt);
  EXPECT_EQ(f, P);
}

TEST(DtFilter, IdempotentAndSubsetOfDt) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto c = make_case(100, seed, SolverKind::nn2opt, 25, 3);
    const Heatmap P = merge_results(c.subs, c.results, 100);
    const Heatmap f = apply_dt_filter(P, c.dt);
    EXPECT_EQ(apply_dt_filter(f, c.dt), f);
    EXPECT_LE(f.support_size(), 3 * 100u - 6);
    for (const auto& e : f.entries()) {
      EXPECT_TRUE(c.dt.has_edge(e.i, e.j));
      EXPECT_EQ(e.p, P.get(e.i, e.j));
    }
  }
}

TEST(DtFilter, SizeMismatch) {
  const auto dt = delaunay_triangulate(gen_uniform(10, 0).points());
  try {
    apply_dt_filter(Heatmap(11), dt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::dimension);
  }
}
