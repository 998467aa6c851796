#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pha/delaunay.hpp"
#include "pha/error.hpp"
#include "pha/graph.hpp"
#include "pha/rng.hpp"

namespace pha {

enum class Variant { regular, sparse, dense };

inline std::string to_string(Variant v) {
  switch (v) {
    case Variant::regular: return "regular";
    case Variant::sparse: return "sparse";
    case Variant::dense: return "dense";
  }
  return "regular";
}

inline Variant parse_variant(const std::string& s) {
  if (s == "regular") return Variant::regular;
  if (s == "sparse") return Variant::sparse;
  if (s == "dense") return Variant::dense;
  throw ArgumentError("unknown graph variant '" + s + "'");
}

struct GraphSpec {
  std::size_t node_count = 0;
  Variant variant = Variant::regular;
  double delete_fraction = 0.6;    // sparse only
  std::size_t extra_edges = 400;   // dense only
  std::uint64_t seed = 0;
};

struct ProblemInstance {
  PhysicalGraph graph;
  NodeId start = kNoNode;
  NodeId goal = kNoNode;
  std::uint64_t seed = 0;
};

/// Uniform points in the unit square, triangulated, then thinned or densified.
/// Draw order from SplitMix64(seed): x0, y0, x1, y1, ...; then, for sparse, a
/// partial Fisher-Yates over the sorted edge list picks the deleted prefix;
/// for dense, (u, v) pairs are drawn until enough new edges exist.
inline PhysicalGraph generate(const GraphSpec& spec) {
  if (spec.node_count < 3) throw ArgumentError("node_count must be at least 3");
  if (!(spec.delete_fraction >= 0.0 && spec.delete_fraction < 1.0)) {
    throw ArgumentError("delete_fraction must lie in [0, 1)");
  }
  SplitMix64 rng(spec.seed);
  std::vector<Point2> points(spec.node_count);
  for (Point2& p : points) {
    p.x = rng.uniform01();
    p.y = rng.uniform01();
  }
  PhysicalGraph regular = delaunay_triangulate(points);
  if (spec.variant == Variant::regular) return regular;

  std::vector<Edge> edges = regular.edges();
  if (spec.variant == Variant::sparse) {
    const auto remove = static_cast<std::size_t>(spec.delete_fraction * static_cast<double>(edges.size()));
    for (std::size_t i = 0; i < remove; ++i) {
      const std::size_t j = i + rng.below(edges.size() - i);
      std::swap(edges[i], edges[j]);
    }
    edges.erase(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(remove));
    return PhysicalGraph(std::move(points), std::move(edges));
  }

  const std::uint64_t n = spec.node_count;
  const std::uint64_t capacity = n * (n - 1) / 2;
  if (edges.size() + spec.extra_edges > capacity) {
    throw ArgumentError("dense request of " + std::to_string(spec.extra_edges) +
                        " extra edges exceeds complete-graph capacity");
  }
  std::vector<std::vector<NodeId>> extra(n);
  std::size_t added = 0;
  while (added < spec.extra_edges) {
    auto u = static_cast<NodeId>(rng.below(n));
    auto v = static_cast<NodeId>(rng.below(n));
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (regular.has_edge(u, v)) continue;
    auto& row = extra[u];
    if (std::find(row.begin(), row.end(), v) != row.end()) continue;
    row.push_back(v);
    edges.push_back({u, v});
    ++added;
  }
  return PhysicalGraph(std::move(points), std::move(edges));
}

/// Draws a uniform distinct (start, goal) pair, resampling until the goal is
/// reachable; gives up after 10·n draws.
inline ProblemInstance sample_instance(PhysicalGraph graph, std::uint64_t seed) {
  const std::size_t n = graph.node_count();
  if (n < 2) throw ArgumentError("instance needs at least 2 nodes");
  SplitMix64 rng(seed);
  for (std::size_t attempt = 0; attempt < 10 * n; ++attempt) {
    const auto s = static_cast<NodeId>(rng.below(n));
    const auto g = static_cast<NodeId>(rng.below(n));
    if (s == g) continue;
    if (dijkstra(graph, s).distance[g] == kInfinity) continue;
    return ProblemInstance{std::move(graph), s, g, seed};
  }
  throw GenerationError("no reachable start/goal pair after " + std::to_string(10 * n) +
                        " attempts");
}

}  // namespace pha
