#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dttgf/heatmap.hpp"
#include "dttgf/instance.hpp"
#include "dttgf/neighbors.hpp"
#include "dttgf/parallel.hpp"
#include "dttgf/random.hpp"
#include "dttgf/sampling.hpp"
#include "dttgf/two_opt.hpp"

namespace dttgf {

inline constexpr std::size_t kHeldKarpMaxNodes = 16;

/// Optimal tour by Held-Karp dynamic programming over subsets. O(2^n n^2).
inline Tour held_karp_exact(const TspInstance& inst) {
  const std::size_t n = inst.size();
  if (n > kHeldKarpMaxNodes) {
    fail(ErrorKind::size, "held_karp_exact: n = " + std::to_string(n) + " exceeds 16");
  }
  if (n <= 3) {
    Tour t;
    t.order.resize(n);
    std::iota(t.order.begin(), t.order.end(), 0);
    return t;
  }
  // Node 0 is the fixed start; subsets range over nodes 1..n-1.
  const std::size_t k = n - 1;
  const std::size_t full = (std::size_t{1} << k);
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> cost(full * k, inf);
  std::vector<std::int8_t> parent(full * k, -1);
  for (std::size_t j = 0; j < k; ++j) {
    cost[(std::size_t{1} << j) * k + j] = inst.distance(0, static_cast<NodeId>(j + 1));
  }
  for (std::size_t mask = 1; mask < full; ++mask) {
    for (std::size_t j = 0; j < k; ++j) {
      if (!(mask & (std::size_t{1} << j))) continue;
      const double base = cost[mask * k + j];
      if (base == inf) continue;
      for (std::size_t nxt = 0; nxt < k; ++nxt) {
        if (mask & (std::size_t{1} << nxt)) continue;
        const std::size_t nm = mask | (std::size_t{1} << nxt);
        const double c = base + inst.distance(static_cast<NodeId>(j + 1), static_cast<NodeId>(nxt + 1));
        if (c < cost[nm * k + nxt]) {
          cost[nm * k + nxt] = c;
          parent[nm * k + nxt] = static_cast<std::int8_t>(j);
        }
      }
    }
  }
  const std::size_t all = full - 1;
  std::size_t last = 0;
  double best = inf;
  for (std::size_t j = 0; j < k; ++j) {
    const double c = cost[all * k + j] + inst.distance(static_cast<NodeId>(j + 1), 0);
    if (c < best) {
      best = c;
      last = j;
    }
  }
  Tour t;
  t.order.reserve(n);
  std::size_t mask = all;
  std::int64_t cur = static_cast<std::int64_t>(last);
  while (cur >= 0) {
    t.order.push_back(static_cast<NodeId>(cur + 1));
    const std::int8_t p = parent[mask * k + static_cast<std::size_t>(cur)];
    mask &= ~(std::size_t{1} << static_cast<std::size_t>(cur));
    cur = p;
  }
  t.order.push_back(0);
  std::reverse(t.order.begin(), t.order.end());
  return t;
}

/// Nearest-neighbor construction from `start`; ties to the lower index.
inline Tour nearest_neighbor_tour(const TspInstance& inst, NodeId start) {
  const std::size_t n = inst.size();
  std::vector<char> used(n, 0);
  Tour t;
  t.order.reserve(n);
  NodeId cur = start;
  used[static_cast<std::size_t>(cur)] = 1;
  t.order.push_back(cur);
  for (std::size_t step = 1; step < n; ++step) {
    NodeId best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < n; ++v) {
      if (used[v]) continue;
      const double d = inst.distance(cur, static_cast<NodeId>(v));
      if (d < best_d) {
        best_d = d;
        best = static_cast<NodeId>(v);
      }
    }
    used[static_cast<std::size_t>(best)] = 1;
    t.order.push_back(best);
    cur = best;
  }
  return t;
}

enum class SolverKind { exact, nn2opt, ensemble };

inline const char* to_string(SolverKind k) noexcept {
  switch (k) {
    case SolverKind::exact: return "exact";
    case SolverKind::nn2opt: return "nn2opt";
    case SolverKind::ensemble: return "ensemble";
  }
  return "?";
}

inline std::optional<SolverKind> parse_solver_kind(const std::string& s) {
  if (s == "exact") return SolverKind::exact;
  if (s == "nn2opt") return SolverKind::nn2opt;
  if (s == "ensemble") return SolverKind::ensemble;
  return std::nullopt;
}

struct SolverSpec {
  SolverKind kind = SolverKind::nn2opt;
  std::size_t restarts = 8;
  std::size_t ensemble_r = 8;
  std::size_t neighbor_k = 10;
};

inline void validate_solver(const SolverSpec& s) {
  if (s.restarts < 1) fail(ErrorKind::config, "solver.restarts must be >= 1");
  if (s.ensemble_r < 1) fail(ErrorKind::config, "solver.ensemble_R must be >= 1");
  if (s.neighbor_k < 1) fail(ErrorKind::config, "solver.neighbor_k must be >= 1");
}

/// One-stage output: a tour over the subgraph's local indices.
struct SubTour {
  Tour tour;
  friend bool operator==(const SubTour&, const SubTour&) = default;
};

/// Two-stage output: an edge heatmap over the subgraph's local indices.
struct SubHeatmap {
  Heatmap heatmap;
  friend bool operator==(const SubHeatmap&, const SubHeatmap&) = default;
};

using SubResult = std::variant<SubTour, SubHeatmap>;

namespace detail {

/// Local NN + 2-opt run for each start in `starts`.
inline std::vector<std::pair<Tour, double>> nn_2opt_runs(const TspInstance& local,
                                                          const std::vector<NodeId>& starts,
                                                          std::size_t neighbor_k) {
  const NeighborLists nbrs = build_neighbor_lists(local, neighbor_k);
  std::vector<std::pair<Tour, double>> runs;
  runs.reserve(starts.size());
  for (const NodeId s : starts) {
    Tour t = two_opt(nearest_neighbor_tour(local, s), local, nbrs);
    const double len = tour_length_unchecked(t, local);
    runs.emplace_back(std::move(t), len);
  }
  return runs;
}

}  // namespace detail

/// Best of `restarts` nearest-neighbor tours from uniformly drawn start nodes,
/// each improved by first-improvement 2-opt to a local optimum.
inline SubResult nn_2opt_solve(const SubGraph& sub, const TspInstance& inst, std::size_t restarts,
                               Rng& rng, std::size_t neighbor_k = 10) {
  if (restarts < 1) fail(ErrorKind::config, "nn_2opt_solve: restarts must be >= 1");
  const TspInstance local = sub.local_instance(inst);
  std::vector<NodeId> starts(restarts);
  for (auto& s : starts) s = static_cast<NodeId>(uniform_index(rng, local.size()));
  auto runs = detail::nn_2opt_runs(local, starts, neighbor_k);
  std::size_t best = 0;
  for (std::size_t k = 1; k < runs.size(); ++k) {
    if (runs[k].second < runs[best].second) best = k;
  }
  return SubTour{std::move(runs[best].first)};
}

/// Edge frequencies over R NN + 2-opt tours with distinct random starts
/// (starts cycle through a random permutation when R exceeds m).
inline SubResult ensemble_heatmap_solve(const SubGraph& sub, const TspInstance& inst,
                                        std::size_t R, Rng& rng, std::size_t neighbor_k = 10) {
  if (R < 1) fail(ErrorKind::config, "ensemble_heatmap_solve: R must be >= 1");
  const TspInstance local = sub.local_instance(inst);
  const std::size_t m = local.size();
  std::vector<NodeId> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = m - 1; i > 0; --i) {
    std::swap(perm[i], perm[uniform_index(rng, i + 1)]);
  }
  std::vector<NodeId> starts(R);
  for (std::size_t r = 0; r < R; ++r) starts[r] = perm[r % m];
  const auto runs = detail::nn_2opt_runs(local, starts, neighbor_k);
  std::vector<std::uint32_t> counts;
  std::vector<std::pair<NodeId, NodeId>> keys;
  for (const auto& [tour, len] : runs) {
    for (const auto& e : tour_edges(tour)) keys.push_back(e);
  }
  std::sort(keys.begin(), keys.end());
  Heatmap h(m);
  for (std::size_t k = 0; k < keys.size();) {
    std::size_t j = k;
    while (j < keys.size() && keys[j] == keys[k]) ++j;
    h.set(keys[k].first, keys[k].second, static_cast<double>(j - k) / static_cast<double>(R));
    k = j;
  }
  return SubHeatmap{std::move(h)};
}

/// Dispatches on spec.kind with the subgraph's own random stream.
inline SubResult solve_subgraph(const SubGraph& sub, const TspInstance& inst,
                                const SolverSpec& spec, const Stream& stream) {
  Rng rng = stream.engine();
  switch (spec.kind) {
    case SolverKind::exact: {
      if (sub.size() > kHeldKarpMaxNodes) {
        fail(ErrorKind::config, "exact subsolver needs sampling.m <= 16");
      }
      return SubTour{held_karp_exact(sub.local_instance(inst))};
    }
    case SolverKind::nn2opt:
      return nn_2opt_solve(sub, inst, spec.restarts, rng, spec.neighbor_k);
    case SolverKind::ensemble:
      return ensemble_heatmap_solve(sub, inst, spec.ensemble_r, rng, spec.neighbor_k);
  }
  fail(ErrorKind::config, "unknown solver kind");
}

/// Solves every subgraph; subgraph i uses stream.child(i) and lands in slot i.
inline std::vector<SubResult> solve_all(const std::vector<SubGraph>& subs, const TspInstance& inst,
                                        const SolverSpec& spec, const Stream& stream,
                                        std::size_t threads = 1) {
  validate_solver(spec);
  std::vector<SubResult> out(subs.size());
  parallel_for(subs.size(), threads, [&](std::size_t i) {
    out[i] = solve_subgraph(subs[i], inst, spec, stream.child(i));
  });
  return out;
}

}  // namespace dttgf
