#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "dttgf/instance.hpp"
#include "dttgf/neighbors.hpp"

namespace dttgf {

inline constexpr double kImprovementEpsilon = 1e-12;

namespace detail {

/// Array tour with a position index; supports cyclic segment reversal.
class ArrayTour {
 public:
  explicit ArrayTour(std::vector<NodeId> order) : order_(std::move(order)), pos_(order_.size()) {
    for (std::size_t k = 0; k < order_.size(); ++k) pos_[static_cast<std::size_t>(order_[k])] = k;
  }

  std::size_t size() const noexcept { return order_.size(); }
  NodeId succ(NodeId v) const { return order_[(pos_[idx(v)] + 1) % order_.size()]; }
  NodeId pred(NodeId v) const {
    const std::size_t n = order_.size();
    return order_[(pos_[idx(v)] + n - 1) % n];
  }
  std::size_t pos(NodeId v) const { return pos_[idx(v)]; }

  /// Reverses the cyclic path from `from` to `to` (following succ). The
  /// shorter of the path and its complement is reversed; both give the same
  /// undirected cycle.
  void reverse_path(NodeId from, NodeId to) {
    const std::size_t n = order_.size();
    std::size_t i = pos_[idx(from)], j = pos_[idx(to)];
    std::size_t len = (j + n - i) % n + 1;
    if (2 * len > n) {
      const std::size_t ni = (j + 1) % n, nj = (i + n - 1) % n;
      i = ni;
      j = nj;
      len = n - len;
    }
    for (std::size_t k = 0; k < len / 2; ++k) {
      const std::size_t a = (i + k) % n, b = (j + n - k) % n;
      std::swap(order_[a], order_[b]);
      pos_[idx(order_[a])] = a;
      pos_[idx(order_[b])] = b;
    }
  }

  Tour to_tour() const { return Tour{order_}; }

 private:
  static std::size_t idx(NodeId v) { return static_cast<std::size_t>(v); }

  std::vector<NodeId> order_;
  std::vector<std::size_t> pos_;
};

/// One first-improvement 2-exchange attempt anchored at `a`, in either tour
/// direction. Returns the length change of the applied move or 0.
inline double try_two_opt_at(ArrayTour& t, const TspInstance& inst, const NeighborLists& nbrs,
                             NodeId a) {
  for (int dir = 0; dir < 2; ++dir) {
    const NodeId an = dir == 0 ? t.succ(a) : t.pred(a);
    const double d1 = inst.distance(a, an);
    for (const NodeId c : nbrs[a]) {
      const double g1 = d1 - inst.distance(a, c);
      if (g1 <= 0.0) break;
      const NodeId cn = dir == 0 ? t.succ(c) : t.pred(c);
      if (c == an || cn == a) continue;
      const double gain = g1 + inst.distance(c, cn) - inst.distance(an, cn);
      if (gain > kImprovementEpsilon) {
        // succ: a an .. c cn -> a c .. an cn; pred: cn c .. an a -> cn an .. c a
        if (dir == 0) {
          t.reverse_path(an, c);
        } else {
          t.reverse_path(c, an);
        }
        return -gain;
      }
    }
  }
  return 0.0;
}

}  // namespace detail

/// First-improvement 2-opt restricted to candidate lists. Sweeps over all
/// nodes until a sweep finds no improving exchange or `max_sweeps` sweeps
/// have run (negative means unbounded). Never lengthens the tour.
inline Tour two_opt(const Tour& start, const TspInstance& inst, const NeighborLists& nbrs,
                    int max_sweeps = -1) {
  const std::size_t n = start.order.size();
  if (n < 4) return start;
  detail::ArrayTour t(start.order);
  for (int sweep = 0; max_sweeps < 0 || sweep < max_sweeps; ++sweep) {
    bool improved = false;
    for (std::size_t v = 0; v < n; ++v) {
      const auto a = static_cast<NodeId>(v);
      while (detail::try_two_opt_at(t, inst, nbrs, a) < 0.0) improved = true;
    }
    if (!improved) break;
  }
  return t.to_tour();
}

inline Tour two_opt(const Tour& start, const TspInstance& inst, std::size_t neighbor_k,
                    int max_sweeps = -1) {
  validate_tour(start, inst.size());
  return two_opt(start, inst, build_neighbor_lists(inst, neighbor_k), max_sweeps);
}

}  // namespace dttgf
