#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "dttgf/geometry.hpp"
#include "dttgf/instance.hpp"
#include "test_support.hpp"

using namespace dttgf;

TEST(InCircumcircle, RightTriangleCases) {
  const Point a{0, 0}, b{1, 0}, c{0, 1};
  EXPECT_EQ(in_circumcircle(a, b, c, {0.25, 0.25}), CircleTest::inside);
  EXPECT_EQ(in_circumcircle(a, b, c, {1, 1}), CircleTest::cocircular);
  EXPECT_EQ(in_circumcircle(a, b, c, {2, 2}), CircleTest::outside);
}

TEST(InCircumcircle, OrientationDoesNotMatter) {
  const Point a{0, 0}, b{1, 0}, c{0, 1};
  EXPECT_EQ(in_circumcircle(a, c, b, {0.25, 0.25}), CircleTest::inside);
  EXPECT_EQ(in_circumcircle(a, c, b, {2, 2}), CircleTest::outside);
}

TEST(InCircumcircle, CollinearTriangleIsRejected) {
  try {
    in_circumcircle({0, 0}, {0.5, 0.5}, {1, 1}, {0, 1});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate_triangle);
  }
}

TEST(Delaunay, SingleTriangle) {
  const auto g = delaunay_triangulate(std::vector<Point>{{0, 0}, {1, 0}, {0, 1}});
  ASSERT_EQ(g.triangles.size(), 1u);
  const std::vector<std::pair<NodeId, NodeId>> want{{0, 1}, {0, 2}, {1, 2}};
  EXPECT_EQ(g.edges, want);
}

TEST(Delaunay, CocircularSquareHasOneDiagonal) {
  const auto g = delaunay_triangulate(std::vector<Point>{{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  EXPECT_EQ(g.triangles.size(), 2u);
  EXPECT_EQ(g.edges.size(), 5u);
  for (auto [i, j] : std::vector<std::pair<NodeId, NodeId>>{{0, 1}, {1, 2}, {2, 3}, {0, 3}}) {
    EXPECT_TRUE(g.has_edge(i, j));
  }
  EXPECT_NE(g.has_edge(0, 2), g.has_edge(1, 3));
}

TEST(Delaunay, HundredRandomPointsHaveEmptyCircumcircles) {
  const auto inst = gen_uniform(100, 0);
  const auto g = delaunay_triangulate(inst.points());
  EXPECT_EQ(oracle::count_circumcircle_violations(g, inst.points()), 0u);
  EXPECT_LE(g.edges.size(), 3 * 100u - 6);
  EXPECT_TRUE(oracle::is_connected(g));
}

TEST(Delaunay, EulerCountsMatchHull) {
  // With h hull vertices a triangulation has 2n - 2 - h triangles and 3n - 3 - h edges.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = gen_uniform(300, seed);
    const auto g = delaunay_triangulate(inst.points());
    const std::size_t n = inst.size();
    const std::size_t h = oracle::hull_size(inst.points());
    EXPECT_EQ(g.triangles.size(), 2 * n - 2 - h) << "seed " << seed;
    EXPECT_EQ(g.edges.size(), 3 * n - 3 - h) << "seed " << seed;
  }
}

TEST(Delaunay, TrianglesAreCounterClockwise) {
  const auto inst = gen_uniform(200, 3);
  const auto g = delaunay_triangulate(inst.points());
  for (const auto& t : g.triangles) {
    EXPECT_GT(orient2d(inst.point(t[0]), inst.point(t[1]), inst.point(t[2])), 0.0);
  }
}

TEST(Delaunay, CollinearInputGivesPath) {
  const std::vector<Point> pts{{0.3, 0}, {0, 0}, {0.9, 0}, {0.1, 0}, {0.2, 0}};
  const auto g = delaunay_triangulate(pts);
  EXPECT_TRUE(g.triangles.empty());
  const std::vector<std::pair<NodeId, NodeId>> want{{0, 2}, {0, 4}, {1, 3}, {3, 4}};
  EXPECT_EQ(g.edges, want);
}

TEST(Delaunay, TwoPointsGiveOneEdge) {
  const auto g = delaunay_triangulate(std::vector<Point>{{0, 0}, {1, 1}});
  ASSERT_EQ(g.edges.size(), 1u);
  EXPECT_TRUE(g.has_edge(0, 1));
}

TEST(Delaunay, DuplicatesAreReportedByIndex) {
  try {
    delaunay_triangulate(std::vector<Point>{{0, 0}, {1, 0}, {0.5, 0.5}, {1, 0}, {0, 1}});
    FAIL() << "expected an error";
  } catch (const DuplicateNodeError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::duplicate_node);
    EXPECT_EQ(e.indices(), (std::vector<std::size_t>{1, 3}));
  }
}

TEST(Delaunay, TooFewPoints) {
  try {
    delaunay_triangulate(std::vector<Point>{{0, 0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::size);
  }
}

TEST(Delaunay, LatticeWithManyCocircularQuads) {
  std::vector<Point> pts;
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) pts.push_back({i / 11.0, j / 11.0});
  const auto g = delaunay_triangulate(pts);
  EXPECT_EQ(oracle::count_circumcircle_violations(g, pts), 0u);
  EXPECT_TRUE(oracle::is_connected(g));
  // Every unit cell gets exactly one diagonal.
  EXPECT_EQ(g.triangles.size(), 2u * 11 * 11);
  EXPECT_EQ(g.edges.size(), 2u * 12 * 11 + 11 * 11);
}

TEST(Delaunay, PointsOnACircle) {
  std::vector<Point> pts;
  const double pi = std::acos(-1.0);
  for (int k = 0; k < 24; ++k) {
    pts.push_back({0.5 + 0.4 * std::cos(2 * pi * k / 24), 0.5 + 0.4 * std::sin(2 * pi * k / 24)});
  }
  pts.push_back({0.5, 0.5});
  const auto g = delaunay_triangulate(pts);
  EXPECT_EQ(oracle::count_circumcircle_violations(g, pts), 0u);
  EXPECT_TRUE(oracle::is_connected(g));
  EXPECT_EQ(g.triangles.size(), 24u);
}

TEST(Delaunay, NearlyCollinearHull) {
  std::vector<Point> pts;
  for (int k = 0; k < 30; ++k) pts.push_back({k / 29.0, 1e-9 * (k % 3)});
  pts.push_back({0.5, 0.7});
  const auto g = delaunay_triangulate(pts);
  EXPECT_TRUE(oracle::is_connected(g));
  EXPECT_LE(g.edges.size(), 3 * pts.size() - 6);
}

TEST(Delaunay, Deterministic) {
  const auto inst = gen_uniform(500, 11);
  const auto a = delaunay_triangulate(inst.points());
  const auto b = delaunay_triangulate(inst.points());
  EXPECT_EQ(a.triangles, b.triangles);
  EXPECT_EQ(a.edges, b.edges);
}

TEST(Delaunay, AdjacencyIsSymmetricAndSorted) {
  const auto inst = gen_uniform(150, 5);
  const auto g = delaunay_triangulate(inst.points());
  std::size_t deg = 0;
  for (NodeId i = 0; i < static_cast<NodeId>(g.n); ++i) {
    const auto& nb = g.neighbors(i);
    EXPECT_TRUE(std::is_sorted(nb.begin(), nb.end()));
    for (NodeId j : nb) EXPECT_TRUE(g.has_edge(j, i));
    deg += nb.size();
  }
  EXPECT_EQ(deg, 2 * g.edges.size());
}
