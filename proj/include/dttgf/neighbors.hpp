#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "dttgf/instance.hpp"

namespace dttgf {

/// Below this size candidate lists hold every other node, which makes
/// neighbor-list 2-opt an exhaustive 2-opt.
inline constexpr std::size_t kFullCandidateThreshold = 128;

/// Per-node candidate lists sorted by increasing distance.
class NeighborLists {
 public:
  NeighborLists() = default;
  NeighborLists(std::size_t n, std::size_t k, std::vector<NodeId> flat)
      : n_(n), k_(k), flat_(std::move(flat)) {}

  std::size_t size() const noexcept { return n_; }
  std::size_t width() const noexcept { return k_; }

  std::span<const NodeId> operator[](NodeId i) const {
    return {flat_.data() + static_cast<std::size_t>(i) * k_, k_};
  }

 private:
  std::size_t n_ = 0;
  std::size_t k_ = 0;
  std::vector<NodeId> flat_;
};

/// k nearest neighbors per node (all others when n <= kFullCandidateThreshold).
/// Ties break by index. Brute force; O(n^2) distance evaluations.
inline NeighborLists build_neighbor_lists(const TspInstance& inst, std::size_t k) {
  const std::size_t n = inst.size();
  if (n <= kFullCandidateThreshold) k = n - 1;
  k = std::min(k, n - 1);
  std::vector<NodeId> flat(n * k);
  std::vector<std::pair<double, NodeId>> buf;
  buf.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    buf.clear();
    const Point& pi = inst.points()[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const Point& pj = inst.points()[j];
      const double dx = pi.x - pj.x, dy = pi.y - pj.y;
      buf.emplace_back(dx * dx + dy * dy, static_cast<NodeId>(j));
    }
    if (k < buf.size()) {
      std::nth_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(k), buf.end());
      buf.resize(k);
    }
    std::sort(buf.begin(), buf.end());
    for (std::size_t r = 0; r < k; ++r) flat[i * k + r] = buf[r].second;
  }
  return NeighborLists(n, k, std::move(flat));
}

}  // namespace dttgf
