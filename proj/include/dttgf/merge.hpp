#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "dttgf/error.hpp"
#include "dttgf/geometry.hpp"
#include "dttgf/heatmap.hpp"
#include "dttgf/instance.hpp"
#include "dttgf/sampling.hpp"
#include "dttgf/subsolver.hpp"

namespace dttgf {

/// S_ij: the number of subgraphs that contain both i and j. Built from
/// per-node membership lists, so counts are computed on demand.
class SelectionCounter {
 public:
  SelectionCounter(std::span<const SubGraph> subs, std::size_t n) : member_of_(n) {
    for (std::size_t s = 0; s < subs.size(); ++s) {
      if (subs[s].parent_size() != n) {
        fail(ErrorKind::dimension, "subgraph parent size does not match n");
      }
      for (const NodeId g : subs[s].nodes()) {
        member_of_[static_cast<std::size_t>(g)].push_back(static_cast<std::uint32_t>(s));
      }
    }
  }

  std::size_t count(NodeId i, NodeId j) const {
    const auto& a = member_of_[static_cast<std::size_t>(i)];
    const auto& b = member_of_[static_cast<std::size_t>(j)];
    std::size_t c = 0;
    for (std::size_t x = 0, y = 0; x < a.size() && y < b.size();) {
      if (a[x] < b[y]) {
        ++x;
      } else if (b[y] < a[x]) {
        ++y;
      } else {
        ++c;
        ++x;
        ++y;
      }
    }
    return c;
  }

 private:
  std::vector<std::vector<std::uint32_t>> member_of_;
};

namespace detail {

struct Contribution {
  std::uint64_t key;
  double value;
  friend bool operator<(const Contribution& a, const Contribution& b) {
    return a.key != b.key ? a.key < b.key : a.value < b.value;
  }
};

/// Sorting contributions before summing makes the fold independent of the
/// order sub-results arrive in (bit-identical sums).
inline Heatmap normalize_contributions(std::vector<Contribution> contribs,
                                       const SelectionCounter& S, std::size_t n) {
  std::sort(contribs.begin(), contribs.end());
  Heatmap P(n);
  for (std::size_t k = 0; k < contribs.size();) {
    std::size_t j = k;
    double sum = 0.0;
    while (j < contribs.size() && contribs[j].key == contribs[k].key) sum += contribs[j++].value;
    const auto [a, b] = edge_from_key(contribs[k].key);
    const std::size_t s = S.count(a, b);
    if (s < j - k) {
      fail(ErrorKind::invariant, "merge: edge selected in more subgraphs than contain it");
    }
    if (sum > 0.0) P.set(a, b, std::min(1.0, sum / static_cast<double>(s)));
    k = j;
  }
  return P;
}

}  // namespace detail

/// P_ij = (number of sub-tours using edge ij) / S_ij.
inline Heatmap merge_one_stage(std::span<const SubGraph> subs, std::span<const Tour> tours,
                               std::size_t n) {
  if (subs.size() != tours.size()) {
    fail(ErrorKind::dimension, "merge_one_stage: subgraph and tour counts differ");
  }
  const SelectionCounter S(subs, n);
  std::vector<detail::Contribution> contribs;
  for (std::size_t l = 0; l < subs.size(); ++l) {
    validate_tour(tours[l], subs[l].size());
    for (const auto& [a, b] : tour_edges(tours[l])) {
      contribs.push_back({edge_key(subs[l].global(a), subs[l].global(b)), 1.0});
    }
  }
  return detail::normalize_contributions(std::move(contribs), S, n);
}

/// P_ij = (sum of sub-heatmap values for ij) / S_ij.
inline Heatmap merge_two_stage(std::span<const SubGraph> subs, std::span<const Heatmap> maps,
                               std::size_t n) {
  if (subs.size() != maps.size()) {
    fail(ErrorKind::dimension, "merge_two_stage: subgraph and heatmap counts differ");
  }
  const SelectionCounter S(subs, n);
  std::vector<detail::Contribution> contribs;
  for (std::size_t l = 0; l < subs.size(); ++l) {
    if (maps[l].size() != subs[l].size()) {
      fail(ErrorKind::dimension, "merge_two_stage: sub-heatmap size differs from subgraph");
    }
    for (const auto& e : maps[l].entries()) {
      contribs.push_back({edge_key(subs[l].global(e.i), subs[l].global(e.j)), e.p});
    }
  }
  return detail::normalize_contributions(std::move(contribs), S, n);
}

/// Routes a homogeneous list of sub-results to the matching merge.
inline Heatmap merge_results(std::span<const SubGraph> subs, std::span<const SubResult> results,
                             std::size_t n) {
  if (subs.size() != results.size()) {
    fail(ErrorKind::dimension, "merge_results: subgraph and result counts differ");
  }
  if (results.empty()) return Heatmap(n);
  if (std::holds_alternative<SubTour>(results.front())) {
    std::vector<Tour> tours;
    tours.reserve(results.size());
    for (const auto& r : results) {
      if (!std::holds_alternative<SubTour>(r)) fail(ErrorKind::invariant, "mixed sub-result kinds");
      tours.push_back(std::get<SubTour>(r).tour);
    }
    return merge_one_stage(subs, tours, n);
  }
  std::vector<Heatmap> maps;
  maps.reserve(results.size());
  for (const auto& r : results) {
    if (!std::holds_alternative<SubHeatmap>(r)) fail(ErrorKind::invariant, "mixed sub-result kinds");
    maps.push_back(std::get<SubHeatmap>(r).heatmap);
  }
  return merge_two_stage(subs, maps, n);
}

/// Zeroes every entry that is not a Delaunay edge.
inline Heatmap apply_dt_filter(const Heatmap& P, const DelaunayGraph& dt) {
  if (P.size() != dt.n) fail(ErrorKind::dimension, "apply_dt_filter: size mismatch");
  Heatmap out(P.size());
  for (const auto& e : P.entries()) {
    if (dt.has_edge(e.i, e.j)) out.set(e.i, e.j, e.p);
  }
  return out;
}

}  // namespace dttgf
