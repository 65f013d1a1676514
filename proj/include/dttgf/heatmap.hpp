#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dttgf/error.hpp"
#include "dttgf/geometry.hpp"

namespace dttgf {

/// Sparse symmetric edge-probability map. An absent entry means p == 0;
/// stored entries are always in (0, 1]. Rows are kept sorted by neighbor so
/// iteration order is deterministic.
class Heatmap {
 public:
  struct Entry {
    NodeId node;
    double p;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  struct Edge {
    NodeId i;
    NodeId j;
    double p;
    friend bool operator==(const Edge&, const Edge&) = default;
  };

  Heatmap() = default;
  explicit Heatmap(std::size_t n) : rows_(n) {}

  std::size_t size() const noexcept { return rows_.size(); }

  double get(NodeId i, NodeId j) const {
    check(i, j);
    const auto& row = rows_[static_cast<std::size_t>(i)];
    const auto it = lower(row, j);
    return (it != row.end() && it->node == j) ? it->p : 0.0;
  }

  /// Sets both (i, j) and (j, i). p == 0 erases the entry.
  void set(NodeId i, NodeId j, double p) {
    check(i, j);
    if (!(p >= 0.0 && p <= 1.0)) {
      fail(ErrorKind::domain, "heatmap value out of [0,1]: " + std::to_string(p));
    }
    put(i, j, p);
    put(j, i, p);
  }

  std::span<const Entry> row(NodeId i) const {
    return rows_[static_cast<std::size_t>(i)];
  }

  /// Number of stored undirected edges.
  std::size_t support_size() const noexcept {
    std::size_t total = 0;
    for (const auto& r : rows_) total += r.size();
    return total / 2;
  }

  bool empty() const noexcept { return support_size() == 0; }

  /// Canonical (i < j) entries in lexicographic order.
  std::vector<Edge> entries() const {
    std::vector<Edge> out;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      for (const auto& e : rows_[i]) {
        if (static_cast<std::size_t>(e.node) > i) out.push_back({static_cast<NodeId>(i), e.node, e.p});
      }
    }
    return out;
  }

  double max_value() const noexcept {
    double m = 0.0;
    for (const auto& r : rows_)
      for (const auto& e : r) m = std::max(m, e.p);
    return m;
  }

  friend bool operator==(const Heatmap&, const Heatmap&) = default;

 private:
  using Row = std::vector<Entry>;

  static Row::const_iterator lower(const Row& row, NodeId j) {
    return std::lower_bound(row.begin(), row.end(), j,
                            [](const Entry& e, NodeId v) { return e.node < v; });
  }

  void check(NodeId i, NodeId j) const {
    const auto n = rows_.size();
    if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= n || static_cast<std::size_t>(j) >= n) {
      fail(ErrorKind::dimension, "heatmap index out of range");
    }
    if (i == j) fail(ErrorKind::domain, "heatmap has no self-edges");
  }

  void put(NodeId i, NodeId j, double p) {
    auto& row = rows_[static_cast<std::size_t>(i)];
    auto it = std::lower_bound(row.begin(), row.end(), j,
                               [](const Entry& e, NodeId v) { return e.node < v; });
    const bool present = it != row.end() && it->node == j;
    if (p == 0.0) {
      if (present) row.erase(it);
    } else if (present) {
      it->p = p;
    } else {
      row.insert(it, Entry{j, p});
    }
  }

  std::vector<Row> rows_;
};

}  // namespace dttgf
