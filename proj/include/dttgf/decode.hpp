#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "dttgf/heatmap.hpp"
#include "dttgf/instance.hpp"
#include "dttgf/neighbors.hpp"
#include "dttgf/parallel.hpp"
#include "dttgf/random.hpp"
#include "dttgf/two_opt.hpp"

namespace dttgf {

namespace detail {

inline void check_heatmap_matches(const Heatmap& P, const TspInstance& inst) {
  if (P.size() != inst.size()) {
    fail(ErrorKind::dimension, "heatmap has " + std::to_string(P.size()) +
                                   " nodes, instance has " + std::to_string(inst.size()));
  }
}

/// Unvisited set with O(1) removal and uniform draws.
class UnvisitedSet {
 public:
  explicit UnvisitedSet(std::size_t n) : items_(n), where_(n) {
    for (std::size_t i = 0; i < n; ++i) {
      items_[i] = static_cast<NodeId>(i);
      where_[i] = i;
    }
  }
  std::size_t size() const noexcept { return items_.size(); }
  bool contains(NodeId v) const { return where_[static_cast<std::size_t>(v)] != kGone; }
  NodeId at(std::size_t k) const { return items_[k]; }
  void erase(NodeId v) {
    const std::size_t k = where_[static_cast<std::size_t>(v)];
    const NodeId last = items_.back();
    items_[k] = last;
    where_[static_cast<std::size_t>(last)] = k;
    items_.pop_back();
    where_[static_cast<std::size_t>(v)] = kGone;
  }
  const std::vector<NodeId>& items() const noexcept { return items_; }

 private:
  static constexpr std::size_t kGone = std::numeric_limits<std::size_t>::max();
  std::vector<NodeId> items_;
  std::vector<std::size_t> where_;
};

}  // namespace detail

/// Starts at node 0 and follows the highest-probability edge to an unvisited
/// node (ties: shorter edge, then lower index). When no unvisited neighbor
/// carries probability, moves to the nearest unvisited node.
inline Tour greedy_decode(const Heatmap& P, const TspInstance& inst) {
  detail::check_heatmap_matches(P, inst);
  const std::size_t n = inst.size();
  detail::UnvisitedSet unvisited(n);
  Tour tour;
  tour.order.reserve(n);
  NodeId cur = 0;
  unvisited.erase(cur);
  tour.order.push_back(cur);
  while (unvisited.size() > 0) {
    NodeId best = -1;
    double best_p = 0.0, best_d = 0.0;
    for (const auto& e : P.row(cur)) {
      if (!unvisited.contains(e.node)) continue;
      const double d = inst.distance(cur, e.node);
      if (best < 0 || e.p > best_p || (e.p == best_p && d < best_d)) {
        best = e.node;
        best_p = e.p;
        best_d = d;
      }
    }
    if (best < 0) {
      double best_dist = std::numeric_limits<double>::infinity();
      for (const NodeId v : unvisited.items()) {
        const double d = inst.distance(cur, v);
        if (d < best_dist || (d == best_dist && v < best)) {
          best_dist = d;
          best = v;
        }
      }
    }
    unvisited.erase(best);
    tour.order.push_back(best);
    cur = best;
  }
  return tour;
}

/// Default smoothing mass for sample_decode: 1e-6 of the largest entry.
inline double default_epsilon(const Heatmap& P) { return 1e-6 * P.max_value(); }

inline constexpr double kZeroHeatmapTemperature = 0.1;

/// Sequential sampling from a uniformly drawn start node: from i, the next
/// unvisited j is drawn with probability proportional to P_ij + eps. With an
/// all-zero heatmap the weights become exp(-d_ij / 0.1) instead. With eps == 0
/// and no probability mass left at i, the draw is uniform over unvisited nodes.
inline Tour sample_decode(const Heatmap& P, const TspInstance& inst, Rng& rng, double eps) {
  detail::check_heatmap_matches(P, inst);
  if (!(eps >= 0.0)) fail(ErrorKind::domain, "sample_decode: eps must be >= 0");
  const std::size_t n = inst.size();
  const bool zero_map = P.empty();
  detail::UnvisitedSet unvisited(n);
  Tour tour;
  tour.order.reserve(n);
  auto cur = static_cast<NodeId>(uniform_index(rng, n));
  unvisited.erase(cur);
  tour.order.push_back(cur);
  std::vector<double> weights;
  std::vector<NodeId> cands;
  while (unvisited.size() > 0) {
    NodeId next = -1;
    if (zero_map) {
      weights.resize(unvisited.size());
      double dmin = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < unvisited.size(); ++k) {
        weights[k] = inst.distance(cur, unvisited.at(k));
        dmin = std::min(dmin, weights[k]);
      }
      double total = 0.0;
      for (auto& w : weights) {
        w = std::exp(-(w - dmin) / kZeroHeatmapTemperature);
        total += w;
      }
      double u = uniform01(rng) * total;
      std::size_t pick = unvisited.size() - 1;
      for (std::size_t k = 0; k < weights.size(); ++k) {
        if (u < weights[k]) {
          pick = k;
          break;
        }
        u -= weights[k];
      }
      next = unvisited.at(pick);
    } else {
      cands.clear();
      weights.clear();
      double sparse = 0.0;
      for (const auto& e : P.row(cur)) {
        if (!unvisited.contains(e.node)) continue;
        cands.push_back(e.node);
        weights.push_back(e.p);
        sparse += e.p;
      }
      const double total = sparse + eps * static_cast<double>(unvisited.size());
      if (total > 0.0) {
        double u = uniform01(rng) * total;
        if (u < sparse) {
          next = cands.back();
          for (std::size_t k = 0; k < cands.size(); ++k) {
            if (u < weights[k]) {
              next = cands[k];
              break;
            }
            u -= weights[k];
          }
        }
      }
      // Smoothing mass (or an empty row with eps == 0): uniform over unvisited.
      if (next < 0) next = unvisited.at(uniform_index(rng, unvisited.size()));
    }
    unvisited.erase(next);
    tour.order.push_back(next);
    cur = next;
  }
  return tour;
}

inline Tour sample_decode(const Heatmap& P, const TspInstance& inst, Rng& rng) {
  return sample_decode(P, inst, rng, default_epsilon(P));
}

struct DecodeResult {
  Tour tour;
  double length = 0.0;
};

/// Best of `samples` independent sample_decode + two_opt runs. Sample k draws
/// from stream.child(k), so samples can run in parallel and best-of-2k always
/// contains the best-of-k candidates. Ties go to the lowest sample index.
inline DecodeResult s2opt_decode(const Heatmap& P, const TspInstance& inst, std::size_t samples,
                                 const Stream& stream, const NeighborLists& nbrs,
                                 std::size_t threads = 1) {
  detail::check_heatmap_matches(P, inst);
  if (samples < 1) fail(ErrorKind::config, "s2opt_decode: samples must be >= 1");
  const double eps = default_epsilon(P);
  std::vector<DecodeResult> runs(samples);
  parallel_for(samples, threads, [&](std::size_t k) {
    Rng rng = stream.child(k).engine();
    Tour t = two_opt(sample_decode(P, inst, rng, eps), inst, nbrs);
    const double len = tour_length_unchecked(t, inst);
    runs[k] = {std::move(t), len};
  });
  std::size_t best = 0;
  for (std::size_t k = 1; k < samples; ++k) {
    if (runs[k].length < runs[best].length) best = k;
  }
  return std::move(runs[best]);
}

inline DecodeResult s2opt_decode(const Heatmap& P, const TspInstance& inst, std::size_t samples,
                                 const Stream& stream, std::size_t neighbor_k = 10) {
  return s2opt_decode(P, inst, samples, stream, build_neighbor_lists(inst, neighbor_k));
}

}  // namespace dttgf
