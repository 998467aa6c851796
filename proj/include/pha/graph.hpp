#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pha/error.hpp"
#include "pha/geometry.hpp"

namespace pha {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Absolute tolerance for comparing path lengths.
inline constexpr double kLengthTolerance = 1e-9;

struct Neighbor {
  NodeId node;
  double weight;
};

/// Undirected edge with u < v.
struct Edge {
  NodeId u;
  NodeId v;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Ground-truth environment: planar points joined by undirected edges whose
/// weight is the Euclidean length. Immutable after construction; adjacency is
/// stored compressed and sorted by neighbor id.
class PhysicalGraph {
 public:
  PhysicalGraph() = default;

  PhysicalGraph(std::vector<Point2> points, std::vector<Edge> edges) : points_(std::move(points)) {
    const auto n = static_cast<NodeId>(points_.size());
    for (Edge& e : edges) {
      if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
        throw ArgumentError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                            ") references a node outside [0," + std::to_string(n) + ")");
      }
      if (e.u == e.v) throw ArgumentError("self-loop at node " + std::to_string(e.u));
      if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end());
    if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end()) {
      throw ArgumentError("duplicate edge (" + std::to_string(dup->u) + "," +
                          std::to_string(dup->v) + ")");
    }
    edges_ = std::move(edges);

    offsets_.assign(points_.size() + 1, 0);
    for (const Edge& e : edges_) {
      ++offsets_[e.u + 1];
      ++offsets_[e.v + 1];
    }
    for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
    adjacency_.resize(offsets_.back());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const Edge& e : edges_) {
      const double w = euclidean(points_[e.u], points_[e.v]);
      adjacency_[fill[e.u]++] = {e.v, w};
      adjacency_[fill[e.v]++] = {e.u, w};
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
      std::sort(adjacency_.begin() + offsets_[i], adjacency_.begin() + offsets_[i + 1],
                [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
    }
  }

  std::size_t node_count() const noexcept { return points_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  bool contains(NodeId id) const noexcept {
    return id >= 0 && static_cast<std::size_t>(id) < points_.size();
  }

  const Point2& position(NodeId id) const { return points_.at(checked(id)); }
  const std::vector<Point2>& points() const noexcept { return points_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  std::span<const Neighbor> neighbors(NodeId id) const {
    const auto i = checked(id);
    return {adjacency_.data() + offsets_[i], adjacency_.data() + offsets_[i + 1]};
  }

  std::optional<double> weight(NodeId u, NodeId v) const {
    const auto adj = neighbors(u);
    auto it = std::lower_bound(adj.begin(), adj.end(), v,
                               [](const Neighbor& n, NodeId id) { return n.node < id; });
    if (it == adj.end() || it->node != v) return std::nullopt;
    return it->weight;
  }

  bool has_edge(NodeId u, NodeId v) const { return weight(u, v).has_value(); }

  friend bool operator==(const PhysicalGraph& a, const PhysicalGraph& b) {
    return a.points_ == b.points_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t checked(NodeId id) const {
    if (!contains(id)) throw ArgumentError("invalid node id " + std::to_string(id));
    return static_cast<std::size_t>(id);
  }

  std::vector<Point2> points_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adjacency_;
};

struct PathResult {
  std::vector<NodeId> nodes;
  double length = 0.0;
};

/// Sum of edge weights along `nodes`; throws if consecutive nodes are not adjacent.
inline double path_length(const PhysicalGraph& graph, std::span<const NodeId> nodes) {
  double total = 0.0;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const auto w = graph.weight(nodes[i - 1], nodes[i]);
    if (!w) {
      throw ArgumentError("nodes " + std::to_string(nodes[i - 1]) + " and " +
                          std::to_string(nodes[i]) + " are not adjacent");
    }
    total += *w;
  }
  return total;
}

struct ShortestPathTree {
  std::vector<double> distance;  // kInfinity when unreachable
  std::vector<NodeId> parent;    // kNoNode for the source and unreachable nodes
};

/// Single-source shortest distances over the full graph. Among equal-length
/// predecessors the smallest node id becomes the parent.
inline ShortestPathTree dijkstra(const PhysicalGraph& graph, NodeId source) {
  if (!graph.contains(source)) throw ArgumentError("invalid source node " + std::to_string(source));
  const std::size_t n = graph.node_count();
  ShortestPathTree tree{std::vector<double>(n, kInfinity), std::vector<NodeId>(n, kNoNode)};
  std::vector<char> settled(n, 0);
  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  tree.distance[source] = 0.0;
  queue.push({0.0, source});
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (settled[u]) continue;
    settled[u] = 1;
    for (const Neighbor& nb : graph.neighbors(u)) {
      if (settled[nb.node]) continue;
      const double nd = d + nb.weight;
      double& cur = tree.distance[nb.node];
      if (nd < cur) {
        cur = nd;
        tree.parent[nb.node] = u;
        queue.push({nd, nb.node});
      } else if (nd == cur && u < tree.parent[nb.node]) {
        tree.parent[nb.node] = u;
      }
    }
  }
  return tree;
}

/// Exact shortest path, or nullopt when s and g are disconnected.
inline std::optional<PathResult> shortest_path(const PhysicalGraph& graph, NodeId s, NodeId g) {
  if (!graph.contains(g)) throw ArgumentError("invalid goal node " + std::to_string(g));
  const ShortestPathTree tree = dijkstra(graph, s);
  if (tree.distance[g] == kInfinity) return std::nullopt;
  PathResult result;
  for (NodeId v = g; v != kNoNode; v = tree.parent[v]) result.nodes.push_back(v);
  std::reverse(result.nodes.begin(), result.nodes.end());
  result.length = tree.distance[g];
  return result;
}

/// Expansion record of a conventional in-memory A* with the Euclidean
/// heuristic and (f, id) tie-breaking. Used as the mandatory-node oracle.
struct AStarReference {
  std::vector<NodeId> expansion_order;  // ends with the goal when it is reached
  std::vector<double> expansion_f;
  double cost = kInfinity;
};

inline AStarReference reference_astar(const PhysicalGraph& graph, NodeId start, NodeId goal) {
  if (!graph.contains(start) || !graph.contains(goal)) throw ArgumentError("invalid start/goal");
  const std::size_t n = graph.node_count();
  const Point2 goal_pos = graph.position(goal);
  std::vector<double> g(n, kInfinity);
  std::vector<char> closed(n, 0);
  using Key = std::pair<double, NodeId>;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> open;
  auto h = [&](NodeId v) { return euclidean(graph.position(v), goal_pos); };
  AStarReference ref;
  g[start] = 0.0;
  open.push({h(start), start});
  while (!open.empty()) {
    const auto [f, u] = open.top();
    open.pop();
    if (closed[u] || f != g[u] + h(u)) continue;
    closed[u] = 1;
    ref.expansion_order.push_back(u);
    ref.expansion_f.push_back(f);
    if (u == goal) {
      ref.cost = g[u];
      break;
    }
    for (const Neighbor& nb : graph.neighbors(u)) {
      if (closed[nb.node]) continue;
      const double ng = g[u] + nb.weight;
      if (ng < g[nb.node] - 1e-12) {
        g[nb.node] = ng;
        open.push({ng + h(nb.node), nb.node});
      }
    }
  }
  return ref;
}

}  // namespace pha
