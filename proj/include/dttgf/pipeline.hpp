#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "dttgf/config.hpp"
#include "dttgf/decode.hpp"
#include "dttgf/geometry.hpp"
#include "dttgf/heatmap.hpp"
#include "dttgf/instance.hpp"
#include "dttgf/mcts.hpp"
#include "dttgf/merge.hpp"
#include "dttgf/neighbors.hpp"
#include "dttgf/random.hpp"
#include "dttgf/sampling.hpp"
#include "dttgf/subsolver.hpp"
#include "dttgf/warmup.hpp"

namespace dttgf {

/// Wall time per stage in milliseconds.
struct StageTimes {
  double triangulation = 0.0;
  double sampling = 0.0;
  double solving = 0.0;
  double merging = 0.0;
  double warmup = 0.0;
  double search = 0.0;
  double total = 0.0;
};

struct RunReport {
  std::string instance;
  std::size_t n = 0;
  Tour tour;
  double length = 0.0;           // unit-square units
  double length_rescaled = 0.0;  // original coordinate units
  Normalization normalization;
  StageTimes times;

  std::size_t dt_edges = 0;
  std::size_t subgraph_count = 0;
  std::size_t subgraph_size = 0;
  std::size_t fallback_subgraphs = 0;
  bool hit_subgraph_cap = false;
  int coverage_min = 0;
  int coverage_max = 0;
  double coverage_mean = 0.0;

  std::size_t support_merged = 0;
  std::size_t support_filtered = 0;
  std::size_t support_warmed = 0;

  bool warmup_ran = false;
  double warmup_initial_length = 0.0;
  double warmup_final_length = 0.0;
  std::size_t warmup_iterations = 0;
  std::size_t warmup_accepted = 0;
  double decoded_length = 0.0;  // decoder output before comparing with the warm-up baseline

  std::uint64_t seed = 0;
  PipelineConfig config;

  std::optional<Heatmap> heatmap_merged;
  std::optional<Heatmap> heatmap_filtered;
  std::optional<Heatmap> heatmap_warmed;
};

namespace detail {

class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double lap_ms() {
    const auto now = std::chrono::steady_clock::now();
    const std::chrono::duration<double, std::milli> d = now - t0_;
    t0_ = now;
    return d.count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

template <typename Fn>
auto run_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("[") + stage + "] " + e.what());
  }
}

}  // namespace detail

/// Triangulate, sample, solve, merge, filter, warm up and decode.
///
/// Deterministic in (instance, config) for any thread count unless a
/// wall-clock budget (MCTS time, warm-up time) is what ends a stage. When the
/// warm-up runs, its baseline tour is kept if the decoder does worse.
/// `warmup_observer` sees every warm-up iteration.
inline RunReport run(const TspInstance& inst, const PipelineConfig& cfg,
                     const std::function<void(const WarmupStep&)>& warmup_observer = {}) {
  detail::run_stage("config", [&] { validate_config(cfg); });
  const std::size_t n = inst.size();
  RunReport rep;
  rep.instance = inst.name();
  rep.n = n;
  rep.normalization = inst.normalization();
  rep.seed = cfg.seed;
  rep.config = cfg;
  rep.config.sampling = resolve_sampling(cfg.sampling, n);
  rep.config.warmup.budget = resolve_warmup_budget(cfg.warmup, n);

  detail::Stopwatch total, watch;

  const DelaunayGraph dt =
      detail::run_stage("triangulation", [&] { return delaunay_triangulate(inst.points()); });
  rep.dt_edges = dt.edges.size();
  rep.times.triangulation = watch.lap_ms();

  const Extraction ex =
      detail::run_stage("sampling", [&] { return extract_subgraphs(dt, inst, cfg.sampling); });
  rep.subgraph_count = ex.subgraphs.size();
  rep.subgraph_size = rep.config.sampling.m;
  rep.fallback_subgraphs = ex.fallback_count;
  rep.hit_subgraph_cap = ex.hit_cap;
  rep.coverage_min = ex.coverage.min();
  rep.coverage_max = ex.coverage.max();
  {
    double sum = 0.0;
    for (const int c : ex.coverage.counts) sum += c;
    rep.coverage_mean = sum / static_cast<double>(n);
  }
  rep.times.sampling = watch.lap_ms();

  const auto results = detail::run_stage("solving", [&] {
    return solve_all(ex.subgraphs, inst, cfg.solver,
                     Stream::for_purpose(cfg.seed, Purpose::subsolver), cfg.threads);
  });
  rep.times.solving = watch.lap_ms();

  Heatmap P = detail::run_stage("merging", [&] {
    Heatmap merged = merge_results(ex.subgraphs, results, n);
    rep.support_merged = merged.support_size();
    if (cfg.keep_heatmaps) rep.heatmap_merged = merged;
    return apply_dt_filter(merged, dt);
  });
  rep.support_filtered = P.support_size();
  if (cfg.keep_heatmaps) rep.heatmap_filtered = P;
  rep.times.merging = watch.lap_ms();

  const NeighborLists nbrs = build_neighbor_lists(inst, cfg.search.neighbor_k);
  const Stream decode_stream = Stream::for_purpose(cfg.seed, Purpose::sampling_decoder);

  std::optional<WarmupResult> warm;
  if (cfg.warmup_enabled) {
    warm = detail::run_stage("warmup", [&] {
      // The baseline starts from the same S+2-opt decode the search stage
      // would produce on the un-warmed heatmap.
      auto pre = s2opt_decode(P, inst, cfg.search.samples, decode_stream, nbrs, cfg.threads);
      return warm_up(P, inst, cfg.warmup, Stream::for_purpose(cfg.seed, Purpose::warmup), nbrs,
                     cfg.threads, warmup_observer, std::move(pre));
    });
    P = warm->heatmap;
    rep.warmup_ran = true;
    rep.warmup_initial_length = warm->initial_length;
    rep.warmup_final_length = warm->final_length;
    rep.warmup_iterations = warm->iterations;
    rep.warmup_accepted = warm->accepted;
  }
  rep.support_warmed = P.support_size();
  if (cfg.keep_heatmaps) rep.heatmap_warmed = P;
  rep.times.warmup = watch.lap_ms();

  Tour tour = detail::run_stage("search", [&] {
    Tour t;
    switch (cfg.search.decoder) {
      case Decoder::greedy:
        t = greedy_decode(P, inst);
        break;
      case Decoder::sample: {
        double best = 0.0;
        for (std::size_t k = 0; k < cfg.search.samples; ++k) {
          Rng rng = decode_stream.child(k).engine();
          Tour c = sample_decode(P, inst, rng);
          const double len = tour_length_unchecked(c, inst);
          if (k == 0 || len < best) {
            best = len;
            t = std::move(c);
          }
        }
        break;
      }
      case Decoder::s2opt:
        t = s2opt_decode(P, inst, cfg.search.samples, decode_stream, nbrs, cfg.threads).tour;
        break;
      case Decoder::mcts: {
        Tour start = s2opt_decode(P, inst, cfg.search.samples, decode_stream, nbrs, cfg.threads).tour;
        if (warm && warm->final_length < tour_length_unchecked(start, inst)) start = warm->baseline;
        MctsBudget budget;
        if (cfg.search.iterations >= 0) budget.iterations = cfg.search.iterations;
        if (cfg.search.time_budget_ms > 0) budget.time_ms = cfg.search.time_budget_ms;
        MctsOptions opts;
        opts.temperature = cfg.search.temperature;
        Rng rng = Stream::for_purpose(cfg.seed, Purpose::mcts).engine();
        t = mcts_search(P, inst, start, budget, rng, build_search_candidates(P, nbrs, &dt), nbrs,
                        opts);
        break;
      }
    }
    validate_tour(t, n);
    return t;
  });
  rep.decoded_length = tour_length_unchecked(tour, inst);
  if (warm && warm->final_length < rep.decoded_length) tour = warm->baseline;
  rep.times.search = watch.lap_ms();

  rep.tour = std::move(tour);
  rep.length = tour_length(rep.tour, inst);
  rep.length_rescaled = rep.length * inst.normalization().scale;
  rep.times.total = total.lap_ms();
  return rep;
}

/// Report as JSON. `include_tour` adds the node order.
inline nlohmann::json to_json(const RunReport& r, bool include_tour = true) {
  nlohmann::json j;
  j["instance"] = r.instance;
  j["n"] = r.n;
  j["length"] = r.length;
  j["length_rescaled"] = r.length_rescaled;
  j["normalization"] = {{"offset_x", r.normalization.offset_x},
                        {"offset_y", r.normalization.offset_y},
                        {"scale", r.normalization.scale}};
  j["times_ms"] = {{"triangulation", r.times.triangulation}, {"sampling", r.times.sampling},
                   {"solving", r.times.solving},             {"merging", r.times.merging},
                   {"warmup", r.times.warmup},               {"search", r.times.search},
                   {"total", r.times.total}};
  j["delaunay_edges"] = r.dt_edges;
  j["subgraphs"] = {{"count", r.subgraph_count},
                    {"size", r.subgraph_size},
                    {"fallback", r.fallback_subgraphs},
                    {"hit_cap", r.hit_subgraph_cap},
                    {"coverage_min", r.coverage_min},
                    {"coverage_max", r.coverage_max},
                    {"coverage_mean", r.coverage_mean}};
  j["heatmap_support"] = {
      {"merged", r.support_merged}, {"filtered", r.support_filtered}, {"warmed", r.support_warmed}};
  j["merge_normalizer"] = "S_ij = number of subgraphs containing both endpoints";
  j["warmup"] = {{"ran", r.warmup_ran},
                 {"initial_length", r.warmup_initial_length},
                 {"final_length", r.warmup_final_length},
                 {"iterations", r.warmup_iterations},
                 {"accepted", r.warmup_accepted}};
  j["decoded_length"] = r.decoded_length;
  j["seeds"] = {{"base", r.seed},
                {"subsolver", Stream::for_purpose(r.seed, Purpose::subsolver).seed()},
                {"sampling_decoder", Stream::for_purpose(r.seed, Purpose::sampling_decoder).seed()},
                {"mcts", Stream::for_purpose(r.seed, Purpose::mcts).seed()}};
  j["config"] = config_entries(r.config);
  if (include_tour) j["tour"] = r.tour.order;
  return j;
}

}  // namespace dttgf
