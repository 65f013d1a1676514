#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dttgf/error.hpp"
#include "dttgf/geometry.hpp"
#include "dttgf/random.hpp"

namespace dttgf {

/// Affine map from stored unit-square coordinates back to the source frame:
/// original = offset + scale * stored. One scale for both axes keeps
/// Euclidean lengths proportional, so length_original = scale * length.
struct Normalization {
  double offset_x = 0.0;
  double offset_y = 0.0;
  double scale = 1.0;

  bool is_identity() const noexcept {
    return offset_x == 0.0 && offset_y == 0.0 && scale == 1.0;
  }
  Point to_original(const Point& p) const noexcept {
    return {offset_x + scale * p.x, offset_y + scale * p.y};
  }
};

/// Maps points into [0,1]^2 unless they already lie there.
inline Normalization normalize_points(std::vector<Point>& pts) {
  Normalization norm;
  if (pts.empty()) return norm;
  double min_x = pts[0].x, max_x = pts[0].x, min_y = pts[0].y, max_y = pts[0].y;
  for (const auto& p : pts) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      fail(ErrorKind::domain, "non-finite coordinate");
    }
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  if (min_x >= 0.0 && min_y >= 0.0 && max_x <= 1.0 && max_y <= 1.0) return norm;
  const double span = std::max(max_x - min_x, max_y - min_y);
  norm.offset_x = min_x;
  norm.offset_y = min_y;
  norm.scale = span > 0.0 ? span : 1.0;
  for (auto& p : pts) {
    p.x = std::clamp((p.x - min_x) / norm.scale, 0.0, 1.0);
    p.y = std::clamp((p.y - min_y) / norm.scale, 0.0, 1.0);
  }
  return norm;
}

class TspInstance {
 public:
  TspInstance() = default;

  /// Points must already lie in the unit square; see normalize_points.
  explicit TspInstance(std::vector<Point> points, std::string name = "instance",
                       Normalization norm = {})
      : points_(std::move(points)), name_(std::move(name)), norm_(norm) {
    if (points_.size() < 2) fail(ErrorKind::size, "instance needs at least 2 points");
    for (const auto& p : points_) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y) || p.x < 0.0 || p.x > 1.0 ||
          p.y < 0.0 || p.y > 1.0) {
        fail(ErrorKind::domain, "instance coordinates must be finite and in [0,1]");
      }
    }
  }

  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<Point>& points() const noexcept { return points_; }
  const Point& point(NodeId i) const { return points_[static_cast<std::size_t>(i)]; }
  const std::string& name() const noexcept { return name_; }
  const Normalization& normalization() const noexcept { return norm_; }

  double distance(NodeId i, NodeId j) const {
    return dttgf::distance(point(i), point(j));
  }

 private:
  std::vector<Point> points_;
  std::string name_;
  Normalization norm_;
};

/// Cyclic visiting order over node indices.
struct Tour {
  std::vector<NodeId> order;

  std::size_t size() const noexcept { return order.size(); }
  friend bool operator==(const Tour&, const Tour&) = default;
};

inline void validate_tour(const Tour& t, std::size_t n) {
  if (t.order.size() != n) {
    fail(ErrorKind::malformed_tour, "tour has " + std::to_string(t.order.size()) +
                                        " entries, expected " + std::to_string(n));
  }
  std::vector<char> seen(n, 0);
  for (const NodeId v : t.order) {
    if (v < 0 || static_cast<std::size_t>(v) >= n) {
      fail(ErrorKind::malformed_tour, "tour index out of range: " + std::to_string(v));
    }
    if (seen[static_cast<std::size_t>(v)]++) {
      fail(ErrorKind::malformed_tour, "tour repeats node " + std::to_string(v));
    }
  }
}

inline bool is_valid_tour(const Tour& t, std::size_t n) {
  try {
    validate_tour(t, n);
    return true;
  } catch (const Error&) {
    return false;
  }
}

/// Sum of cyclic edge lengths. Assumes a validated tour.
inline double tour_length_unchecked(const Tour& t, const TspInstance& inst) {
  double total = 0.0;
  const std::size_t n = t.order.size();
  for (std::size_t k = 0; k < n; ++k) {
    total += inst.distance(t.order[k], t.order[(k + 1) % n]);
  }
  return total;
}

inline double tour_length(const Tour& t, const TspInstance& inst) {
  validate_tour(t, inst.size());
  return tour_length_unchecked(t, inst);
}

inline double drop_percent(double candidate, double reference) {
  if (!(reference > 0.0)) fail(ErrorKind::domain, "drop_percent: reference must be > 0");
  return 100.0 * (candidate - reference) / reference;
}

inline std::pair<NodeId, NodeId> canonical(NodeId i, NodeId j) noexcept {
  return i < j ? std::pair{i, j} : std::pair{j, i};
}

inline std::uint64_t edge_key(NodeId i, NodeId j) noexcept {
  const auto [a, b] = canonical(i, j);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

inline std::pair<NodeId, NodeId> edge_from_key(std::uint64_t key) noexcept {
  return {static_cast<NodeId>(key >> 32), static_cast<NodeId>(key & 0xFFFFFFFFu)};
}

/// Distinct canonical edges of a cyclic tour, sorted. A 2-node tour has one.
inline std::vector<std::pair<NodeId, NodeId>> tour_edges(const Tour& t) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  const std::size_t n = t.order.size();
  edges.reserve(n);
  for (std::size_t k = 0; k < n; ++k) edges.push_back(canonical(t.order[k], t.order[(k + 1) % n]));
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

inline TspInstance gen_uniform(std::size_t n, std::uint64_t seed) {
  if (n < 2) fail(ErrorKind::size, "gen_uniform: n must be >= 2");
  Rng rng = Stream::for_purpose(seed, Purpose::generation).engine();
  std::vector<Point> pts(n);
  for (auto& p : pts) {
    p.x = uniform01(rng);
    p.y = uniform01(rng);
  }
  return TspInstance(std::move(pts), "uniform-" + std::to_string(n) + "-" + std::to_string(seed));
}

}  // namespace dttgf
