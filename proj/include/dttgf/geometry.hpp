#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dttgf/error.hpp"

namespace dttgf {

using NodeId = std::int32_t;

/// Absolute tolerance for the orientation and in-circle determinants. Valid
/// because every coordinate handed to the triangulator lives in [0,1]^2.
inline constexpr double kGeoEpsilon = 1e-12;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(const Point& a, const Point& b) noexcept {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Twice the signed area of (a, b, c); positive when counter-clockwise.
inline double orient2d(const Point& a, const Point& b, const Point& c) noexcept {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

/// Standard in-circle determinant, translated to p. Positive when p lies
/// inside the circumcircle of the counter-clockwise triangle (a, b, c).
inline double incircle_det(const Point& a, const Point& b, const Point& c,
                           const Point& p) noexcept {
  const double adx = a.x - p.x, ady = a.y - p.y;
  const double bdx = b.x - p.x, bdy = b.y - p.y;
  const double cdx = c.x - p.x, cdy = c.y - p.y;
  const double alift = adx * adx + ady * ady;
  const double blift = bdx * bdx + bdy * bdy;
  const double clift = cdx * cdx + cdy * cdy;
  return alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
         clift * (adx * bdy - bdx * ady);
}

enum class CircleTest { inside, outside, cocircular };

inline const char* to_string(CircleTest t) noexcept {
  switch (t) {
    case CircleTest::inside: return "inside";
    case CircleTest::outside: return "outside";
    case CircleTest::cocircular: return "cocircular";
  }
  return "?";
}

/// Classifies p against the circumcircle of (a, b, c). Clockwise input is
/// accepted and reoriented; collinear input throws.
inline CircleTest in_circumcircle(const Point& a, const Point& b, const Point& c,
                                  const Point& p) {
  const double o = orient2d(a, b, c);
  if (std::abs(o) <= kGeoEpsilon) {
    fail(ErrorKind::degenerate_triangle, "in_circumcircle: collinear triangle");
  }
  double det = incircle_det(a, b, c, p);
  if (o < 0) det = -det;
  if (std::abs(det) <= kGeoEpsilon) return CircleTest::cocircular;
  return det > 0 ? CircleTest::inside : CircleTest::outside;
}

/// Delaunay triangulation over instance node indices.
struct DelaunayGraph {
  std::size_t n = 0;
  /// Counter-clockwise triangles. Empty for n == 2 and collinear input.
  std::vector<std::array<NodeId, 3>> triangles;
  /// Canonical (i < j) undirected edges, sorted.
  std::vector<std::pair<NodeId, NodeId>> edges;
  /// Sorted neighbor lists, symmetric.
  std::vector<std::vector<NodeId>> adjacency;

  bool has_edge(NodeId i, NodeId j) const {
    if (i == j || i < 0 || j < 0 || static_cast<std::size_t>(i) >= n ||
        static_cast<std::size_t>(j) >= n) {
      return false;
    }
    const auto& row = adjacency[static_cast<std::size_t>(i)];
    return std::binary_search(row.begin(), row.end(), j);
  }

  const std::vector<NodeId>& neighbors(NodeId i) const {
    return adjacency[static_cast<std::size_t>(i)];
  }
};

namespace detail {

inline DelaunayGraph graph_from_edges(std::size_t n,
                                      std::vector<std::array<NodeId, 3>> triangles,
                                      std::vector<std::pair<NodeId, NodeId>> edges) {
  for (auto& e : edges) {
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  DelaunayGraph g;
  g.n = n;
  g.triangles = std::move(triangles);
  g.adjacency.assign(n, {});
  for (const auto& [i, j] : edges) {
    g.adjacency[static_cast<std::size_t>(i)].push_back(j);
    g.adjacency[static_cast<std::size_t>(j)].push_back(i);
  }
  for (auto& row : g.adjacency) std::sort(row.begin(), row.end());
  g.edges = std::move(edges);
  return g;
}

// Hilbert index on a 2^16 grid; used only to order insertions.
inline std::uint64_t hilbert_index(double x, double y) noexcept {
  constexpr std::uint32_t side = 1u << 16;
  auto clampi = [](double v) {
    const double s = std::clamp(v, 0.0, 1.0) * (side - 1);
    return static_cast<std::uint32_t>(s);
  };
  std::uint32_t hx = clampi(x), hy = clampi(y);
  std::uint64_t d = 0;
  for (std::uint32_t s = side / 2; s > 0; s /= 2) {
    const std::uint32_t rx = (hx & s) ? 1u : 0u;
    const std::uint32_t ry = (hy & s) ? 1u : 0u;
    d += static_cast<std::uint64_t>(s) * s * ((3u * rx) ^ ry);
    if (ry == 0) {
      if (rx == 1) {
        hx = side - 1 - hx;
        hy = side - 1 - hy;
      }
      std::swap(hx, hy);
    }
  }
  return d;
}

/// Incremental Bowyer-Watson over a triangle mesh closed by "ghost" triangles
/// that share a single vertex at infinity. Ghost (u, v, G) marks hull edge
/// u->v with the exterior on its left.
class BowyerWatson {
 public:
  static constexpr NodeId kGhost = -1;

  explicit BowyerWatson(std::span<const Point> pts) : pts_(pts) {
    mark_.reserve(pts.size() * 2 + 8);
  }

  /// Returns false when every point is collinear (no seed triangle exists).
  bool run(const std::vector<NodeId>& order) {
    if (order.size() < 3) return false;
    const NodeId i0 = order[0], i1 = order[1];
    std::size_t seed_pos = 0;
    for (std::size_t k = 2; k < order.size(); ++k) {
      if (std::abs(orient2d(pt(i0), pt(i1), pt(order[k]))) > kGeoEpsilon) {
        seed_pos = k;
        break;
      }
    }
    if (seed_pos == 0) return false;
    NodeId i2 = order[seed_pos];
    NodeId j1 = i1;
    if (orient2d(pt(i0), pt(j1), pt(i2)) < 0) std::swap(j1, i2);
    init_seed(i0, j1, i2);
    for (std::size_t k = 2; k < order.size(); ++k) {
      if (k == seed_pos) continue;
      insert(order[k]);
    }
    return true;
  }

  std::vector<std::array<NodeId, 3>> real_triangles() const {
    std::vector<std::array<NodeId, 3>> out;
    for (const auto& t : tris_) {
      if (t.alive && !is_ghost(t)) out.push_back(t.v);
    }
    return out;
  }

 private:
  struct Tri {
    std::array<NodeId, 3> v{};
    // nb[k] is the triangle across edge (v[k], v[k+1]).
    std::array<std::int32_t, 3> nb{-1, -1, -1};
    bool alive = true;
  };

  struct BoundaryEdge {
    NodeId a, b;
    std::int32_t outside;
  };

  const Point& pt(NodeId i) const { return pts_[static_cast<std::size_t>(i)]; }

  static bool is_ghost(const Tri& t) noexcept {
    return t.v[0] == kGhost || t.v[1] == kGhost || t.v[2] == kGhost;
  }

  std::int32_t add_tri(NodeId a, NodeId b, NodeId c) {
    Tri t;
    t.v = {a, b, c};
    std::int32_t id;
    if (!free_.empty()) {
      id = free_.back();
      free_.pop_back();
      tris_[static_cast<std::size_t>(id)] = t;
    } else {
      id = static_cast<std::int32_t>(tris_.size());
      tris_.push_back(t);
      mark_.push_back(0);
    }
    return id;
  }

  Tri& tri(std::int32_t id) { return tris_[static_cast<std::size_t>(id)]; }
  const Tri& tri(std::int32_t id) const { return tris_[static_cast<std::size_t>(id)]; }

  static int edge_index(const Tri& t, NodeId a, NodeId b) noexcept {
    for (int k = 0; k < 3; ++k) {
      if (t.v[k] == a && t.v[(k + 1) % 3] == b) return k;
    }
    return -1;
  }

  void init_seed(NodeId a, NodeId b, NodeId c) {
    const std::int32_t t0 = add_tri(a, b, c);
    const std::array<NodeId, 3> v{a, b, c};
    std::array<std::int32_t, 3> ghosts{};
    for (int k = 0; k < 3; ++k) {
      ghosts[k] = add_tri(v[(k + 1) % 3], v[k], kGhost);
      tri(t0).nb[k] = ghosts[k];
      tri(ghosts[k]).nb[0] = t0;
    }
    // Ghost k = (v[k+1], v[k], G): edge 1 is (v[k], G), edge 2 is (G, v[k+1]).
    for (int k = 0; k < 3; ++k) {
      const int prev = (k + 2) % 3;
      tri(ghosts[k]).nb[1] = ghosts[prev];
      tri(ghosts[prev]).nb[2] = ghosts[k];
    }
    last_ = t0;
  }

  bool ghost_conflict(const Tri& t, const Point& p) const {
    int k = 0;
    while (t.v[k] == kGhost || t.v[(k + 1) % 3] == kGhost) ++k;
    const Point& u = pt(t.v[k]);
    const Point& w = pt(t.v[(k + 1) % 3]);
    const double o = orient2d(u, w, p);
    if (o > kGeoEpsilon) return true;
    if (o < -kGeoEpsilon) return false;
    const double ex = w.x - u.x, ey = w.y - u.y;
    const double len2 = ex * ex + ey * ey;
    const double s = ((p.x - u.x) * ex + (p.y - u.y) * ey) / len2;
    return s > 0.0 && s < 1.0;
  }

  bool conflict(const Tri& t, const Point& p) const {
    if (is_ghost(t)) return ghost_conflict(t, p);
    return incircle_det(pt(t.v[0]), pt(t.v[1]), pt(t.v[2]), p) > kGeoEpsilon;
  }

  // Visibility walk from the last created triangle. Returns a triangle that
  // must join the cavity of p.
  std::int32_t locate(const Point& p) {
    std::int32_t cur = last_;
    const std::size_t max_steps = 4 * tris_.size() + 16;
    for (std::size_t step = 0; step < max_steps; ++step) {
      const Tri& t = tri(cur);
      if (is_ghost(t)) return ghost_start(cur, p);
      bool moved = false;
      for (int r = 0; r < 3; ++r) {
        const int k = static_cast<int>((r + step) % 3);
        if (orient2d(pt(t.v[k]), pt(t.v[(k + 1) % 3]), p) < 0) {
          cur = t.nb[k];
          moved = true;
          break;
        }
      }
      if (!moved) return cur;
    }
    // Walk failed to settle (floating-point cycling); scan.
    for (std::size_t id = 0; id < tris_.size(); ++id) {
      const Tri& t = tris_[id];
      if (t.alive && conflict(t, p)) return static_cast<std::int32_t>(id);
    }
    fail(ErrorKind::invariant, "delaunay: point location failed");
  }

  std::int32_t ghost_start(std::int32_t g, const Point& p) const {
    std::int32_t cur = g;
    do {
      if (conflict(tri(cur), p)) return cur;
      const Tri& t = tri(cur);
      // Step along the hull ring via the (v, G) edge.
      int k = 0;
      while (t.v[(k + 1) % 3] != kGhost) ++k;
      cur = t.nb[k];
    } while (cur != g);
    fail(ErrorKind::invariant, "delaunay: no visible hull edge for exterior point");
  }

  void insert(NodeId pid) {
    const Point& p = pt(pid);
    const std::int32_t start = locate(p);
    ++stamp_;
    cavity_.clear();
    cavity_.push_back(start);
    mark_[static_cast<std::size_t>(start)] = stamp_;
    for (std::size_t head = 0; head < cavity_.size(); ++head) {
      const Tri& t = tri(cavity_[head]);
      for (int k = 0; k < 3; ++k) {
        const std::int32_t nb = t.nb[k];
        if (mark_[static_cast<std::size_t>(nb)] == stamp_) continue;
        if (conflict(tri(nb), p)) {
          mark_[static_cast<std::size_t>(nb)] = stamp_;
          cavity_.push_back(nb);
        }
      }
    }
    // Grow until every real boundary edge sees p strictly on its inner side,
    // so the fan of new triangles around p is non-degenerate.
    bool grown = true;
    while (grown) {
      grown = false;
      collect_boundary();
      for (const auto& e : boundary_) {
        if (e.a == kGhost || e.b == kGhost) continue;
        if (orient2d(pt(e.a), pt(e.b), p) <= kGeoEpsilon &&
            mark_[static_cast<std::size_t>(e.outside)] != stamp_) {
          mark_[static_cast<std::size_t>(e.outside)] = stamp_;
          cavity_.push_back(e.outside);
          grown = true;
        }
      }
    }
    check_cavity_is_disk();
    retriangulate(pid);
  }

  void collect_boundary() {
    boundary_.clear();
    for (const auto id : cavity_) {
      const Tri& t = tri(id);
      for (int k = 0; k < 3; ++k) {
        if (mark_[static_cast<std::size_t>(t.nb[k])] != stamp_) {
          boundary_.push_back({t.v[k], t.v[(k + 1) % 3], t.nb[k]});
        }
      }
    }
  }

  std::size_t slot(NodeId v) const {
    return v == kGhost ? pts_.size() : static_cast<std::size_t>(v);
  }

  void check_cavity_is_disk() {
    next_.assign(pts_.size() + 1, -2);
    for (const auto& e : boundary_) {
      if (next_[slot(e.a)] != -2) {
        fail(ErrorKind::invariant, "delaunay: cavity boundary is not simple");
      }
      next_[slot(e.a)] = e.b;
    }
    std::size_t steps = 0;
    NodeId v = boundary_.front().a;
    do {
      v = next_[slot(v)];
      if (v == -2) fail(ErrorKind::invariant, "delaunay: open cavity boundary");
      ++steps;
    } while (v != boundary_.front().a && steps <= boundary_.size());
    if (steps != boundary_.size()) {
      fail(ErrorKind::invariant, "delaunay: cavity is not a topological disk");
    }
    // Every vertex touched by the cavity must remain on its boundary.
    for (const auto id : cavity_) {
      for (const NodeId w : tri(id).v) {
        if (next_[slot(w)] == -2) {
          fail(ErrorKind::invariant, "delaunay: cavity swallowed a vertex");
        }
      }
    }
  }

  void retriangulate(NodeId pid) {
    for (const auto id : cavity_) {
      tri(id).alive = false;
      free_.push_back(id);
    }
    start_of_.assign(pts_.size() + 1, -1);
    end_of_.assign(pts_.size() + 1, -1);
    created_.clear();
    for (const auto& e : boundary_) {
      const std::int32_t id = add_tri(e.a, e.b, pid);
      mark_[static_cast<std::size_t>(id)] = 0;
      Tri& nt = tri(id);
      nt.nb[0] = e.outside;
      Tri& out = tri(e.outside);
      const int ko = edge_index(out, e.b, e.a);
      if (ko < 0) fail(ErrorKind::invariant, "delaunay: broken adjacency");
      out.nb[ko] = id;
      start_of_[slot(e.a)] = id;
      end_of_[slot(e.b)] = id;
      created_.push_back(id);
    }
    for (const auto id : created_) {
      Tri& t = tri(id);
      // edge 1 = (b, p) pairs with the triangle starting at b; edge 2 = (p, a)
      // pairs with the triangle ending at a.
      t.nb[1] = start_of_[slot(t.v[1])];
      t.nb[2] = end_of_[slot(t.v[0])];
      if (!is_ghost(t)) last_ = id;
    }
  }

  std::span<const Point> pts_;
  std::vector<Tri> tris_;
  std::vector<std::int32_t> free_;
  std::vector<std::uint32_t> mark_;
  std::uint32_t stamp_ = 0;
  std::vector<std::int32_t> cavity_;
  std::vector<BoundaryEdge> boundary_;
  std::vector<NodeId> next_;
  std::vector<std::int32_t> start_of_, end_of_, created_;
  std::int32_t last_ = 0;
};

}  // namespace detail

/// Delaunay triangulation of `points` (expected in the unit square).
///
/// Exact duplicates are rejected. Fully collinear input yields the path graph
/// in lexicographic (x, y) order, and n == 2 yields the single edge.
/// Cocircular configurations are never flipped, so output is a deterministic
/// function of the input list.
inline DelaunayGraph delaunay_triangulate(std::span<const Point> points) {
  const std::size_t n = points.size();
  if (n < 2) fail(ErrorKind::size, "delaunay_triangulate: need at least 2 points");
  for (const auto& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      fail(ErrorKind::domain, "delaunay_triangulate: non-finite coordinate");
    }
  }

  std::vector<NodeId> lex(n);
  std::iota(lex.begin(), lex.end(), 0);
  auto lex_less = [&](NodeId a, NodeId b) {
    const auto& pa = points[static_cast<std::size_t>(a)];
    const auto& pb = points[static_cast<std::size_t>(b)];
    if (pa.x != pb.x) return pa.x < pb.x;
    if (pa.y != pb.y) return pa.y < pb.y;
    return a < b;
  };
  std::sort(lex.begin(), lex.end(), lex_less);
  std::vector<std::size_t> dups;
  for (std::size_t k = 1; k < n; ++k) {
    if (points[static_cast<std::size_t>(lex[k])] == points[static_cast<std::size_t>(lex[k - 1])]) {
      dups.push_back(static_cast<std::size_t>(lex[k - 1]));
      dups.push_back(static_cast<std::size_t>(lex[k]));
    }
  }
  if (!dups.empty()) {
    // Every member of each duplicate group, once.
    std::sort(dups.begin(), dups.end());
    dups.erase(std::unique(dups.begin(), dups.end()), dups.end());
    throw DuplicateNodeError(std::move(dups));
  }

  auto path_graph = [&] {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (std::size_t k = 1; k < n; ++k) edges.emplace_back(lex[k - 1], lex[k]);
    return detail::graph_from_edges(n, {}, std::move(edges));
  };
  if (n == 2) return path_graph();

  std::vector<std::uint64_t> keys(n);
  for (std::size_t i = 0; i < n; ++i) keys[i] = detail::hilbert_index(points[i].x, points[i].y);
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    const auto ka = keys[static_cast<std::size_t>(a)], kb = keys[static_cast<std::size_t>(b)];
    return ka != kb ? ka < kb : a < b;
  });

  detail::BowyerWatson bw(points);
  if (!bw.run(order)) return path_graph();

  auto triangles = bw.real_triangles();
  std::sort(triangles.begin(), triangles.end(), [](const auto& a, const auto& b) {
    auto ra = a, rb = b;
    std::rotate(ra.begin(), std::min_element(ra.begin(), ra.end()), ra.end());
    std::rotate(rb.begin(), std::min_element(rb.begin(), rb.end()), rb.end());
    return ra < rb;
  });
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(triangles.size() * 3);
  for (auto& t : triangles) {
    std::rotate(t.begin(), std::min_element(t.begin(), t.end()), t.end());
    for (int k = 0; k < 3; ++k) edges.emplace_back(t[k], t[(k + 1) % 3]);
  }
  return detail::graph_from_edges(n, std::move(triangles), std::move(edges));
}

inline DelaunayGraph delaunay_triangulate(const std::vector<Point>& points) {
  return delaunay_triangulate(std::span<const Point>(points));
}

}  // namespace dttgf
