#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dttgf/error.hpp"
#include "dttgf/io.hpp"
#include "dttgf/sampling.hpp"
#include "dttgf/subsolver.hpp"
#include "dttgf/warmup.hpp"

namespace dttgf {

enum class Decoder { greedy, sample, s2opt, mcts };

inline const char* to_string(Decoder d) noexcept {
  switch (d) {
    case Decoder::greedy: return "greedy";
    case Decoder::sample: return "sample";
    case Decoder::s2opt: return "s2opt";
    case Decoder::mcts: return "mcts";
  }
  return "?";
}

inline std::optional<Decoder> parse_decoder(const std::string& s) {
  if (s == "greedy") return Decoder::greedy;
  if (s == "sample") return Decoder::sample;
  if (s == "s2opt") return Decoder::s2opt;
  if (s == "mcts") return Decoder::mcts;
  return std::nullopt;
}

struct SearchParams {
  Decoder decoder = Decoder::s2opt;
  std::size_t samples = 16;
  /// MCTS wall-clock budget; 0 disables the time limit.
  double time_budget_ms = 10000.0;
  /// MCTS iteration cap; negative disables it.
  std::int64_t iterations = -1;
  std::size_t neighbor_k = 10;
  double temperature = 1.0;
};

struct PipelineConfig {
  SamplingParams sampling;
  SolverSpec solver;
  bool warmup_enabled = true;
  WarmupParams warmup;
  SearchParams search;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  /// Keep pre-filter, post-filter and post-warm-up heatmaps on the report.
  bool keep_heatmaps = false;
};

inline void validate_search(const SearchParams& s) {
  if (s.samples < 1) fail(ErrorKind::config, "search.samples must be >= 1");
  if (s.neighbor_k < 1) fail(ErrorKind::config, "search.neighbor_k must be >= 1");
  if (s.time_budget_ms < 0) fail(ErrorKind::config, "search.time_budget_ms must be >= 0");
  if (s.temperature < 0) fail(ErrorKind::config, "search.temperature must be >= 0");
  if (s.decoder == Decoder::mcts && s.time_budget_ms == 0 && s.iterations < 0) {
    fail(ErrorKind::config, "mcts decoder needs search.time_budget_ms or search.iterations");
  }
}

/// Checks size-independent settings; sampling sizes are checked against n in run().
inline void validate_config(const PipelineConfig& c) {
  if (c.sampling.min_cover < 1) fail(ErrorKind::config, "sampling.min_cover must be >= 1");
  validate_solver(c.solver);
  validate_warmup(c.warmup);
  validate_search(c.search);
  if (c.threads < 1) fail(ErrorKind::config, "threads must be >= 1");
}

namespace detail {

template <typename T>
T config_number(const std::string& key, const std::string& value) {
  T out{};
  if (!parse_number(std::string_view(value), out)) {
    fail(ErrorKind::config, "bad value for " + key + ": '" + value + "'");
  }
  return out;
}

inline bool config_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  fail(ErrorKind::config, "bad boolean for " + key + ": '" + value + "'");
}

}  // namespace detail

/// Applies one key=value setting.
inline void apply_config_entry(PipelineConfig& c, const std::string& key, const std::string& value) {
  using detail::config_bool;
  using detail::config_number;
  if (key == "sampling.m") {
    c.sampling.m = config_number<std::size_t>(key, value);
  } else if (key == "sampling.min_cover") {
    c.sampling.min_cover = config_number<int>(key, value);
  } else if (key == "sampling.max_subgraphs") {
    c.sampling.max_subgraphs = config_number<std::size_t>(key, value);
  } else if (key == "sampling.anchor") {
    const auto a = parse_anchor(value);
    if (!a) fail(ErrorKind::config, "unknown sampling.anchor '" + value + "'");
    c.sampling.anchor = *a;
  } else if (key == "solver.kind") {
    const auto k = parse_solver_kind(value);
    if (!k) fail(ErrorKind::config, "unknown solver.kind '" + value + "'");
    c.solver.kind = *k;
  } else if (key == "solver.restarts") {
    c.solver.restarts = config_number<std::size_t>(key, value);
  } else if (key == "solver.ensemble_R") {
    c.solver.ensemble_r = config_number<std::size_t>(key, value);
  } else if (key == "solver.neighbor_k") {
    c.solver.neighbor_k = config_number<std::size_t>(key, value);
  } else if (key == "warmup.enabled") {
    c.warmup_enabled = config_bool(key, value);
  } else if (key == "warmup.beta") {
    c.warmup.beta = config_number<double>(key, value);
  } else if (key == "warmup.budget") {
    c.warmup.budget = config_number<long>(key, value);
  } else if (key == "warmup.samples") {
    c.warmup.samples = config_number<std::size_t>(key, value);
  } else if (key == "warmup.denominator") {
    if (value == "del") {
      c.warmup.denominator = WarmupDenominator::deleted;
    } else if (value == "baseline") {
      c.warmup.denominator = WarmupDenominator::baseline;
    } else {
      fail(ErrorKind::config, "warmup.denominator must be del or baseline");
    }
  } else if (key == "warmup.strict_improving") {
    c.warmup.strict_improving = config_bool(key, value);
  } else if (key == "warmup.flip_sign") {
    c.warmup.flip_sign = config_bool(key, value);
  } else if (key == "warmup.time_budget_ms") {
    c.warmup.time_budget_ms = config_number<double>(key, value);
  } else if (key == "search.decoder") {
    const auto d = parse_decoder(value);
    if (!d) fail(ErrorKind::config, "unknown search.decoder '" + value + "'");
    c.search.decoder = *d;
  } else if (key == "search.samples") {
    c.search.samples = config_number<std::size_t>(key, value);
  } else if (key == "search.time_budget_ms") {
    c.search.time_budget_ms = config_number<double>(key, value);
  } else if (key == "search.iterations") {
    c.search.iterations = config_number<std::int64_t>(key, value);
  } else if (key == "search.neighbor_k") {
    c.search.neighbor_k = config_number<std::size_t>(key, value);
  } else if (key == "search.temperature") {
    c.search.temperature = config_number<double>(key, value);
  } else if (key == "seed") {
    c.seed = config_number<std::uint64_t>(key, value);
  } else if (key == "threads") {
    c.threads = config_number<std::size_t>(key, value);
  } else {
    fail(ErrorKind::config, "unknown config key '" + key + "'");
  }
}

/// Flat "key = value" text; '#' starts a comment.
inline PipelineConfig parse_config(std::string_view text, PipelineConfig base = {}) {
  const auto lines = detail::lines_of(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::string_view line = lines[ln];
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorKind::config, "config line " + std::to_string(ln + 1) + ": expected key=value");
    }
    apply_config_entry(base, std::string(detail::trim(line.substr(0, eq))),
                       std::string(detail::trim(line.substr(eq + 1))));
  }
  validate_config(base);
  return base;
}

/// Every setting as key/value strings, in key order.
inline std::map<std::string, std::string> config_entries(const PipelineConfig& c) {
  auto num = [](auto v) { return std::to_string(v); };
  auto dbl = [](double v) { return detail::format_double(v); };
  return {
      {"sampling.m", num(c.sampling.m)},
      {"sampling.min_cover", num(c.sampling.min_cover)},
      {"sampling.max_subgraphs", num(c.sampling.max_subgraphs)},
      {"sampling.anchor", to_string(c.sampling.anchor)},
      {"solver.kind", to_string(c.solver.kind)},
      {"solver.restarts", num(c.solver.restarts)},
      {"solver.ensemble_R", num(c.solver.ensemble_r)},
      {"solver.neighbor_k", num(c.solver.neighbor_k)},
      {"warmup.enabled", c.warmup_enabled ? "true" : "false"},
      {"warmup.beta", dbl(c.warmup.beta)},
      {"warmup.budget", num(c.warmup.budget)},
      {"warmup.samples", num(c.warmup.samples)},
      {"warmup.denominator", c.warmup.denominator == WarmupDenominator::deleted ? "del" : "baseline"},
      {"warmup.strict_improving", c.warmup.strict_improving ? "true" : "false"},
      {"warmup.flip_sign", c.warmup.flip_sign ? "true" : "false"},
      {"warmup.time_budget_ms", dbl(c.warmup.time_budget_ms)},
      {"search.decoder", to_string(c.search.decoder)},
      {"search.samples", num(c.search.samples)},
      {"search.time_budget_ms", dbl(c.search.time_budget_ms)},
      {"search.iterations", num(c.search.iterations)},
      {"search.neighbor_k", num(c.search.neighbor_k)},
      {"search.temperature", dbl(c.search.temperature)},
      {"seed", num(c.seed)},
      {"threads", num(c.threads)},
  };
}

}  // namespace dttgf
