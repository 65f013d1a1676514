#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "dttgf/decode.hpp"
#include "dttgf/geometry.hpp"
#include "dttgf/heatmap.hpp"
#include "dttgf/neighbors.hpp"

namespace dttgf {

/// Stop conditions for mcts_search; at least one must be set. Either limit
/// ending first stops the search.
struct MctsBudget {
  std::optional<std::int64_t> iterations;
  std::optional<double> time_ms;
};

struct MctsOptions {
  double temperature = 1.0;
  /// Consecutive non-improving steps before restarting from a sampled tour;
  /// 0 means n.
  std::size_t stagnation = 0;
};

struct MctsStats {
  std::int64_t iterations = 0;
  std::int64_t improvements = 0;
  std::int64_t restarts = 0;
};

/// Union of DT neighbors, heatmap support and k nearest neighbors per node,
/// sorted and deduplicated.
inline std::vector<std::vector<NodeId>> build_search_candidates(const Heatmap& P,
                                                                const NeighborLists& nbrs,
                                                                const DelaunayGraph* dt) {
  const std::size_t n = P.size();
  std::vector<std::vector<NodeId>> cands(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& c = cands[i];
    const auto v = static_cast<NodeId>(i);
    for (const NodeId j : nbrs[v]) c.push_back(j);
    for (const auto& e : P.row(v)) c.push_back(e.node);
    if (dt != nullptr) {
      for (const NodeId j : dt->neighbors(v)) c.push_back(j);
    }
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
  return cands;
}

/// Heatmap-guided 2-exchange search.
///
/// Each step picks a uniform node a and draws a partner c from a's candidate
/// list with weight max(Q_ac + T * P_ac * sqrt(ln(N + 1) / (n_ac + 1)), 0)
/// plus a small floor, where Q_ac is the running mean of the realized
/// improvement of exchange (a, c) in units of the current mean edge length,
/// n_ac its visit count and N the total step count. The move replaces
/// (a, succ a), (c, succ c) with (a, c), (succ a, succ c) and is applied only
/// when it shortens the tour; its statistics are updated either way. After
/// `stagnation` steps without improvement the current tour restarts from a
/// heatmap-sampled tour polished by two_opt. Returns the best tour seen.
inline Tour mcts_search(const Heatmap& P, const TspInstance& inst, const Tour& start,
                        const MctsBudget& budget, Rng& rng,
                        const std::vector<std::vector<NodeId>>& candidates,
                        const NeighborLists& nbrs, const MctsOptions& opts = {},
                        MctsStats* stats_out = nullptr) {
  validate_tour(start, inst.size());
  detail::check_heatmap_matches(P, inst);
  if (!budget.iterations && !budget.time_ms) {
    fail(ErrorKind::config, "mcts_search: budget needs iterations or time");
  }
  if ((budget.iterations && *budget.iterations < 0) || (budget.time_ms && *budget.time_ms < 0)) {
    fail(ErrorKind::config, "mcts_search: budget must be non-negative");
  }
  if (candidates.size() != inst.size()) {
    fail(ErrorKind::dimension, "mcts_search: candidate lists do not match instance");
  }
  const std::size_t n = inst.size();
  MctsStats stats;
  Tour best = start;
  if (n < 4 || (budget.iterations && *budget.iterations == 0) ||
      (budget.time_ms && *budget.time_ms == 0)) {
    if (stats_out) *stats_out = stats;
    return best;
  }

  struct EdgeStat {
    double q = 0.0;
    std::int64_t visits = 0;
  };
  std::unordered_map<std::uint64_t, EdgeStat> table;
  const std::size_t stagnation_limit = opts.stagnation ? opts.stagnation : n;
  const double eps = default_epsilon(P);
  const auto t0 = std::chrono::steady_clock::now();

  double best_len = tour_length_unchecked(start, inst);
  detail::ArrayTour cur(start.order);
  double cur_len = best_len;
  std::size_t since_improvement = 0;
  std::vector<NodeId> pool;
  std::vector<double> weights;

  for (std::int64_t it = 0;; ++it) {
    if (budget.iterations && it >= *budget.iterations) break;
    if (budget.time_ms && (it & 63) == 0) {
      const std::chrono::duration<double, std::milli> el = std::chrono::steady_clock::now() - t0;
      if (el.count() >= *budget.time_ms) break;
    }
    ++stats.iterations;

    const auto a = static_cast<NodeId>(uniform_index(rng, n));
    const NodeId an = cur.succ(a);
    const NodeId ap = cur.pred(a);
    pool.clear();
    weights.clear();
    const double log_total = std::log(static_cast<double>(it) + 1.0);
    double total_w = 0.0;
    for (const NodeId c : candidates[static_cast<std::size_t>(a)]) {
      if (c == an || c == ap) continue;
      const auto found = table.find(edge_key(a, c));
      const EdgeStat s = found == table.end() ? EdgeStat{} : found->second;
      const double explore = opts.temperature * P.get(a, c) *
                             std::sqrt(log_total / (static_cast<double>(s.visits) + 1.0));
      const double w = std::max(s.q + explore, 0.0) + 1e-3;
      pool.push_back(c);
      weights.push_back(w);
      total_w += w;
    }
    if (!pool.empty()) {
      double u = uniform01(rng) * total_w;
      NodeId c = pool.back();
      for (std::size_t k = 0; k < pool.size(); ++k) {
        if (u < weights[k]) {
          c = pool[k];
          break;
        }
        u -= weights[k];
      }
      const NodeId cn = cur.succ(c);
      const double delta = inst.distance(a, c) + inst.distance(an, cn) -
                           inst.distance(a, an) - inst.distance(c, cn);
      const double unit = cur_len / static_cast<double>(n);
      EdgeStat& s = table[edge_key(a, c)];
      ++s.visits;
      s.q += (-delta / unit - s.q) / static_cast<double>(s.visits);
      if (delta < -kImprovementEpsilon) {
        cur.reverse_path(an, c);
        cur_len += delta;
        since_improvement = 0;
        ++stats.improvements;
        if (cur_len < best_len - kImprovementEpsilon) {
          best = cur.to_tour();
          best_len = tour_length_unchecked(best, inst);
          cur_len = best_len;
        }
        continue;
      }
    }
    if (++since_improvement >= stagnation_limit) {
      Tour fresh = two_opt(sample_decode(P, inst, rng, eps), inst, nbrs);
      const double len = tour_length_unchecked(fresh, inst);
      ++stats.restarts;
      if (len < best_len - kImprovementEpsilon) {
        best = fresh;
        best_len = len;
      }
      cur = detail::ArrayTour(std::move(fresh.order));
      cur_len = len;
      since_improvement = 0;
    }
  }
  if (stats_out) *stats_out = stats;
  return best;
}

/// Convenience overload: candidates from heatmap support and 10 nearest
/// neighbors.
inline Tour mcts_search(const Heatmap& P, const TspInstance& inst, const Tour& start,
                        const MctsBudget& budget, Rng& rng, const MctsOptions& opts = {}) {
  const NeighborLists nbrs = build_neighbor_lists(inst, 10);
  return mcts_search(P, inst, start, budget, rng, build_search_candidates(P, nbrs, nullptr), nbrs,
                     opts);
}

}  // namespace dttgf
