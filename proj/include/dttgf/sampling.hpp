#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dttgf/error.hpp"
#include "dttgf/geometry.hpp"
#include "dttgf/instance.hpp"

namespace dttgf {

/// Per-node count of subgraph memberships.
struct CoverageCounter {
  std::vector<int> counts;

  explicit CoverageCounter(std::size_t n = 0) : counts(n, 0) {}
  std::size_t size() const noexcept { return counts.size(); }
  int min() const { return counts.empty() ? 0 : *std::min_element(counts.begin(), counts.end()); }
  int max() const { return counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end()); }
};

/// Ordered subset of instance nodes with a global->local lookup.
class SubGraph {
 public:
  SubGraph() = default;
  SubGraph(std::vector<NodeId> nodes, std::size_t parent_n, bool used_fallback = false)
      : nodes_(std::move(nodes)), parent_n_(parent_n), used_fallback_(used_fallback) {
    lookup_.reserve(nodes_.size());
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      const NodeId g = nodes_[k];
      if (g < 0 || static_cast<std::size_t>(g) >= parent_n_) {
        fail(ErrorKind::dimension, "subgraph node out of range");
      }
      lookup_.emplace_back(g, static_cast<NodeId>(k));
    }
    std::sort(lookup_.begin(), lookup_.end());
    for (std::size_t k = 1; k < lookup_.size(); ++k) {
      if (lookup_[k].first == lookup_[k - 1].first) {
        fail(ErrorKind::invariant, "subgraph repeats a node");
      }
    }
  }

  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t parent_size() const noexcept { return parent_n_; }
  const std::vector<NodeId>& nodes() const noexcept { return nodes_; }
  NodeId global(NodeId local) const { return nodes_[static_cast<std::size_t>(local)]; }
  bool used_fallback() const noexcept { return used_fallback_; }

  std::optional<NodeId> local_of(NodeId g) const {
    const auto it = std::lower_bound(lookup_.begin(), lookup_.end(), std::pair{g, NodeId{-1}});
    if (it == lookup_.end() || it->first != g) return std::nullopt;
    return it->second;
  }

  bool contains(NodeId g) const { return local_of(g).has_value(); }

  /// The subgraph as a standalone instance over local indices.
  TspInstance local_instance(const TspInstance& inst) const {
    std::vector<Point> pts;
    pts.reserve(nodes_.size());
    for (const NodeId g : nodes_) pts.push_back(inst.point(g));
    return TspInstance(std::move(pts), inst.name() + "/sub");
  }

  friend bool operator==(const SubGraph& a, const SubGraph& b) {
    return a.nodes_ == b.nodes_ && a.parent_n_ == b.parent_n_ &&
           a.used_fallback_ == b.used_fallback_;
  }

 private:
  std::vector<NodeId> nodes_;
  std::vector<std::pair<NodeId, NodeId>> lookup_;
  std::size_t parent_n_ = 0;
  bool used_fallback_ = false;
};

/// Which member the next frontier node must be closest to.
enum class GrowthAnchor { last_added, seed, nearest_to_set };

inline const char* to_string(GrowthAnchor a) noexcept {
  switch (a) {
    case GrowthAnchor::last_added: return "last_added";
    case GrowthAnchor::seed: return "seed";
    case GrowthAnchor::nearest_to_set: return "nearest_to_set";
  }
  return "?";
}

inline std::optional<GrowthAnchor> parse_anchor(const std::string& s) {
  if (s == "last_added") return GrowthAnchor::last_added;
  if (s == "seed") return GrowthAnchor::seed;
  if (s == "nearest_to_set") return GrowthAnchor::nearest_to_set;
  return std::nullopt;
}

struct SamplingParams {
  std::size_t m = 0;               // 0: default_subgraph_size(n)
  int min_cover = 3;
  std::size_t max_subgraphs = 0;   // 0: n * min_cover
  GrowthAnchor anchor = GrowthAnchor::last_added;
};

inline std::size_t default_subgraph_size(std::size_t n) {
  const std::size_t m = n >= 500 ? 50 : std::max<std::size_t>(10, n / 4);
  return std::min(m, n);
}

/// Each extraction raises the count of a node still below min_cover, so
/// n * min_cover subgraphs always suffice; the default cap is that bound.
/// (ceil(4n/m) is too tight: distance-greedy growth re-absorbs covered nodes
/// and typically needs 2-3x that many subgraphs.)
inline std::size_t default_max_subgraphs(std::size_t n, int min_cover) {
  return n * static_cast<std::size_t>(std::max(min_cover, 1));
}

/// Node with the lowest coverage count; ties go to the smallest index.
inline NodeId pick_seed(const CoverageCounter& O) {
  if (O.counts.empty()) fail(ErrorKind::size, "pick_seed: empty coverage counter");
  return static_cast<NodeId>(std::min_element(O.counts.begin(), O.counts.end()) - O.counts.begin());
}

/// Grows a subgraph of exactly m nodes from `seed` along Delaunay edges.
/// The frontier (DT neighbors of the member set) is scanned for the node
/// closest to the anchor, ties to the smallest index. An empty frontier falls
/// back to the nearest non-member anywhere and flags the subgraph. Every
/// member's coverage count is incremented once.
inline SubGraph grow_subgraph(NodeId seed, const DelaunayGraph& dt, const TspInstance& inst,
                              std::size_t m, CoverageCounter& O,
                              GrowthAnchor anchor = GrowthAnchor::last_added) {
  const std::size_t n = inst.size();
  if (dt.n != n || O.size() != n) fail(ErrorKind::dimension, "grow_subgraph: size mismatch");
  if (m > n) fail(ErrorKind::size, "grow_subgraph: m exceeds n");
  if (m < 2) fail(ErrorKind::config, "grow_subgraph: m must be >= 2");
  if (seed < 0 || static_cast<std::size_t>(seed) >= n) {
    fail(ErrorKind::dimension, "grow_subgraph: seed out of range");
  }

  enum : char { kOut = 0, kFrontier = 1, kMember = 2 };
  std::vector<char> state(n, kOut);
  std::vector<NodeId> members{seed};
  std::vector<NodeId> frontier;
  members.reserve(m);
  bool fallback = false;

  auto admit = [&](NodeId v) {
    state[static_cast<std::size_t>(v)] = kMember;
    for (const NodeId w : dt.neighbors(v)) {
      if (state[static_cast<std::size_t>(w)] == kOut) {
        state[static_cast<std::size_t>(w)] = kFrontier;
        frontier.push_back(w);
      }
    }
  };
  admit(seed);

  auto score = [&](NodeId v) {
    switch (anchor) {
      case GrowthAnchor::last_added: return inst.distance(members.back(), v);
      case GrowthAnchor::seed: return inst.distance(seed, v);
      case GrowthAnchor::nearest_to_set: {
        double best = std::numeric_limits<double>::infinity();
        for (const NodeId u : members) best = std::min(best, inst.distance(u, v));
        return best;
      }
    }
    return 0.0;
  };

  while (members.size() < m) {
    NodeId pick = -1;
    double pick_d = std::numeric_limits<double>::infinity();
    std::size_t pick_slot = 0;
    for (std::size_t k = 0; k < frontier.size(); ++k) {
      const NodeId v = frontier[k];
      const double d = score(v);
      if (d < pick_d || (d == pick_d && v < pick)) {
        pick = v;
        pick_d = d;
        pick_slot = k;
      }
    }
    if (pick >= 0) {
      frontier[pick_slot] = frontier.back();
      frontier.pop_back();
    } else {
      fallback = true;
      for (std::size_t v = 0; v < n; ++v) {
        if (state[v] != kOut) continue;
        const double d = score(static_cast<NodeId>(v));
        if (d < pick_d) {
          pick = static_cast<NodeId>(v);
          pick_d = d;
        }
      }
    }
    members.push_back(pick);
    admit(pick);
  }
  for (const NodeId v : members) ++O.counts[static_cast<std::size_t>(v)];
  return SubGraph(std::move(members), n, fallback);
}

struct Extraction {
  std::vector<SubGraph> subgraphs;
  CoverageCounter coverage;
  bool hit_cap = false;
  std::size_t fallback_count = 0;
};

inline void validate_sampling(const SamplingParams& p, std::size_t n) {
  if (p.m < 2 || p.m > n) {
    fail(ErrorKind::config, "sampling.m must be in [2, n]; got " + std::to_string(p.m));
  }
  if (p.min_cover < 1) fail(ErrorKind::config, "sampling.min_cover must be >= 1");
  if (p.max_subgraphs < 1) fail(ErrorKind::config, "sampling.max_subgraphs must be >= 1");
}

/// Fills in size-dependent defaults (m, max_subgraphs) for an instance of n.
inline SamplingParams resolve_sampling(SamplingParams p, std::size_t n) {
  if (p.m == 0) p.m = default_subgraph_size(n);
  if (p.max_subgraphs == 0) p.max_subgraphs = default_max_subgraphs(n, p.min_cover);
  return p;
}

/// Repeats pick_seed + grow_subgraph until every node is covered min_cover
/// times or max_subgraphs subgraphs exist. Sequential by contract.
inline Extraction extract_subgraphs(const DelaunayGraph& dt, const TspInstance& inst,
                                    SamplingParams params) {
  const std::size_t n = inst.size();
  params = resolve_sampling(params, n);
  validate_sampling(params, n);
  Extraction out;
  out.coverage = CoverageCounter(n);
  while (out.coverage.min() < params.min_cover) {
    if (out.subgraphs.size() >= params.max_subgraphs) {
      out.hit_cap = true;
      break;
    }
    const NodeId seed = pick_seed(out.coverage);
    out.subgraphs.push_back(grow_subgraph(seed, dt, inst, params.m, out.coverage, params.anchor));
    if (out.subgraphs.back().used_fallback()) ++out.fallback_count;
  }
  return out;
}

}  // namespace dttgf
