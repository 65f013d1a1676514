#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dttgf/decode.hpp"
#include "dttgf/heatmap.hpp"
#include "dttgf/instance.hpp"
#include "dttgf/neighbors.hpp"

namespace dttgf {

using Edge = std::pair<NodeId, NodeId>;
using EdgeSet = std::set<Edge>;

/// Length used to normalize the exponent of the back-propagation step.
enum class WarmupDenominator { deleted, baseline };

struct WarmupParams {
  double beta = 0.1;
  /// Maximum number of tested edges; negative means min(n, 200).
  long budget = -1;
  std::size_t samples = 16;
  WarmupDenominator denominator = WarmupDenominator::deleted;
  /// Back-propagate only on iterations where the deletion improved T_b.
  bool strict_improving = false;
  /// Negates alpha; exposed for measurement only.
  bool flip_sign = false;
  /// Wall-clock cap in milliseconds; 0 disables it (and keeps runs deterministic).
  double time_budget_ms = 0.0;
};

inline long resolve_warmup_budget(const WarmupParams& p, std::size_t n) {
  return p.budget < 0 ? static_cast<long>(std::min<std::size_t>(n, 200)) : p.budget;
}

inline void validate_warmup(const WarmupParams& p) {
  if (!(p.beta > 0.0)) fail(ErrorKind::config, "warmup.beta must be > 0");
  if (p.samples < 1) fail(ErrorKind::config, "warmup.samples must be >= 1");
  if (p.time_budget_ms < 0.0) fail(ErrorKind::config, "warmup.time_budget_ms must be >= 0");
}

/// Untried support edge with the largest P_ij * d_ij; ties to the smaller
/// canonical edge. Empty when every support edge has been tried.
inline std::optional<Edge> fitness_argmax(const Heatmap& P, const TspInstance& inst,
                                          const EdgeSet& tried) {
  std::optional<Edge> best;
  double best_a = -1.0;
  for (const auto& e : P.entries()) {
    if (tried.count({e.i, e.j})) continue;
    const double a = e.p * inst.distance(e.i, e.j);
    if (a > best_a) {
      best_a = a;
      best = Edge{e.i, e.j};
    }
  }
  return best;
}

/// beta * (exp((len_b - len_del) / ref) - 1) with ref = len_del or len_b.
inline double backprop_delta(double len_b, double len_del, double beta,
                             WarmupDenominator denominator = WarmupDenominator::deleted) {
  if (!(beta > 0.0)) fail(ErrorKind::domain, "backprop: beta must be > 0");
  if (!(len_b > 0.0) || !(len_del > 0.0)) {
    fail(ErrorKind::domain, "backprop: tour lengths must be positive");
  }
  const double ref = denominator == WarmupDenominator::deleted ? len_del : len_b;
  return beta * (std::exp((len_b - len_del) / ref) - 1.0);
}

/// Applies P_e += alpha(e) * beta * (exp((D(T_b) - D(T_del)) / D_ref) - 1) to
/// the edges of both tours, clamped to [0, 1]. alpha is 0 on shared edges,
/// +1 on edges only in T_b and -1 on edges only in T_del. D_ref is D(T_del)
/// or D(T_b) per `denominator`. Other entries are left untouched.
inline void backprop_update(Heatmap& P, const Tour& baseline, const Tour& deleted, double beta,
                            const TspInstance& inst,
                            WarmupDenominator denominator = WarmupDenominator::deleted,
                            bool flip_sign = false) {
  const double delta = backprop_delta(tour_length(baseline, inst), tour_length(deleted, inst),
                                      beta, denominator);
  if (delta == 0.0) return;
  const auto eb = tour_edges(baseline);
  const auto ed = tour_edges(deleted);
  const double sign = flip_sign ? -1.0 : 1.0;
  auto bump = [&](const Edge& e, double alpha) {
    const double v = std::clamp(P.get(e.first, e.second) + sign * alpha * delta, 0.0, 1.0);
    P.set(e.first, e.second, v);
  };
  // Both lists are sorted: walk them together to classify each edge.
  std::size_t x = 0, y = 0;
  while (x < eb.size() || y < ed.size()) {
    if (y == ed.size() || (x < eb.size() && eb[x] < ed[y])) {
      bump(eb[x++], +1.0);
    } else if (x == eb.size() || ed[y] < eb[x]) {
      bump(ed[y++], -1.0);
    } else {
      ++x;
      ++y;
    }
  }
}

/// One tested edge, reported to an optional observer.
struct WarmupStep {
  std::size_t iteration = 0;
  Edge edge{};
  double baseline_length = 0.0;  // D(T_b) before the step
  double deleted_length = 0.0;   // D(T_del)
  bool accepted = false;
  const Heatmap* before_backprop = nullptr;
  const Heatmap* after_backprop = nullptr;
  const Tour* baseline = nullptr;
  const Tour* deleted = nullptr;
};

struct WarmupResult {
  Heatmap heatmap;
  Tour baseline;
  double initial_length = 0.0;
  double final_length = 0.0;
  std::size_t iterations = 0;
  std::size_t accepted = 0;
  std::vector<double> baseline_trace;  // D(T_b) after each iteration
};

/// Pseudo-reinforcement warm-up. The initial baseline is `initial` when given,
/// else s2opt_decode(P) drawn from `stream`; iteration k decodes from
/// stream.child(k + 1).
///
/// Each iteration zeroes the untried edge of highest fitness, decodes T_del,
/// back-propagates, and then keeps the deletion (and T_del as the new
/// baseline) if D(T_del) < D(T_b), otherwise restores the edge's value.
inline WarmupResult warm_up(Heatmap P, const TspInstance& inst, const WarmupParams& params,
                            const Stream& stream, const NeighborLists& nbrs,
                            std::size_t threads = 1,
                            const std::function<void(const WarmupStep&)>& observer = {},
                            std::optional<DecodeResult> initial = std::nullopt) {
  validate_warmup(params);
  detail::check_heatmap_matches(P, inst);
  const long budget = resolve_warmup_budget(params, inst.size());
  const auto t0 = std::chrono::steady_clock::now();

  WarmupResult res;
  if (!initial) initial = s2opt_decode(P, inst, params.samples, stream, nbrs, threads);
  validate_tour(initial->tour, inst.size());
  res.baseline = std::move(initial->tour);
  res.initial_length = tour_length_unchecked(res.baseline, inst);
  double len_b = res.initial_length;

  EdgeSet tried;
  Heatmap snapshot;
  for (long it = 0; it < budget; ++it) {
    if (params.time_budget_ms > 0.0) {
      const std::chrono::duration<double, std::milli> el = std::chrono::steady_clock::now() - t0;
      if (el.count() >= params.time_budget_ms) break;
    }
    const auto e = fitness_argmax(P, inst, tried);
    if (!e) break;
    const double saved = P.get(e->first, e->second);
    P.set(e->first, e->second, 0.0);
    auto del = s2opt_decode(P, inst, params.samples,
                            stream.child(static_cast<std::uint64_t>(it) + 1), nbrs, threads);
    const bool improved = del.length < len_b;

    if (observer) snapshot = P;
    if (!params.strict_improving || improved) {
      backprop_update(P, res.baseline, del.tour, params.beta, inst, params.denominator,
                      params.flip_sign);
    }
    if (observer) {
      WarmupStep step;
      step.iteration = static_cast<std::size_t>(it);
      step.edge = *e;
      step.baseline_length = len_b;
      step.deleted_length = del.length;
      step.accepted = improved;
      step.before_backprop = &snapshot;
      step.after_backprop = &P;
      step.baseline = &res.baseline;
      step.deleted = &del.tour;
      observer(step);
    }

    if (improved) {
      P.set(e->first, e->second, 0.0);
      res.baseline = std::move(del.tour);
      len_b = del.length;
      ++res.accepted;
    } else {
      P.set(e->first, e->second, saved);
    }
    tried.insert(*e);
    ++res.iterations;
    res.baseline_trace.push_back(len_b);
  }
  res.final_length = len_b;
  res.heatmap = std::move(P);
  return res;
}

}  // namespace dttgf
