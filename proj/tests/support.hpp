// Independent oracles, generators and hand-built fixtures shared by the tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "pha/pha.hpp"

namespace testing_support {

using namespace pha;

// ---------------------------------------------------------------------------
// Oracles

/// Bellman-Ford over the undirected edge list.
inline std::vector<double> bellman_ford(const PhysicalGraph& g, NodeId s) {
  std::vector<double> d(g.node_count(), kInfinity);
  d[s] = 0.0;
  for (std::size_t round = 0; round + 1 < g.node_count(); ++round) {
    bool changed = false;
    for (const Edge& e : g.edges()) {
      const double w = euclidean(g.position(e.u), g.position(e.v));
      if (d[e.u] + w < d[e.v]) d[e.v] = d[e.u] + w, changed = true;
      if (d[e.v] + w < d[e.u]) d[e.u] = d[e.v] + w, changed = true;
    }
    if (!changed) break;
  }
  return d;
}

/// True when some circle through u and v has no point strictly inside. The
/// centre c(t) = mid + t·normal; point p is outside-or-on iff A + B·t >= 0,
/// so the edge passes iff those half-lines intersect.
inline bool has_empty_circle(const std::vector<Point2>& pts, NodeId u, NodeId v) {
  const long double ux = pts[u].x, uy = pts[u].y, vx = pts[v].x, vy = pts[v].y;
  const long double mx = (ux + vx) / 2, my = (uy + vy) / 2;
  const long double nx = -(vy - uy), ny = vx - ux;
  long double lo = -std::numeric_limits<long double>::infinity();
  long double hi = std::numeric_limits<long double>::infinity();
  const long double eps = 1e-15L;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (static_cast<NodeId>(i) == u || static_cast<NodeId>(i) == v) continue;
    const long double px = pts[i].x, py = pts[i].y;
    // |c - p|^2 - |c - u|^2 = |p|^2 - |u|^2 - 2 c·(p - u)
    const long double a = px * px + py * py - ux * ux - uy * uy - 2 * (mx * (px - ux) + my * (py - uy));
    const long double b = -2 * (nx * (px - ux) + ny * (py - uy));
    if (std::fabs(b) < 1e-300L) {
      if (a < -eps) return false;
    } else if (b > 0) {
      lo = std::max(lo, -a / b);
    } else {
      hi = std::min(hi, -a / b);
    }
  }
  return lo <= hi + 1e-9L;
}

inline std::size_t circumcircle_violations(const PhysicalGraph& g) {
  std::size_t bad = 0;
  for (const Edge& e : g.edges()) bad += has_empty_circle(g.points(), e.u, e.v) ? 0 : 1;
  return bad;
}

/// Minimum spanning tree weight by trying every (n-1)-edge subset.
inline double brute_force_mst(const WeightMatrix& w) {
  const std::size_t n = w.size();
  if (n <= 1) return 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) edges.push_back({i, j});
  }
  std::vector<char> pick(edges.size(), 0);
  std::fill(pick.end() - static_cast<std::ptrdiff_t>(n - 1), pick.end(), 1);
  double best = kInfinity;
  do {
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    double total = 0.0;
    bool tree = true;
    for (std::size_t k = 0; k < edges.size() && tree; ++k) {
      if (!pick[k]) continue;
      const std::size_t a = find(edges[k].first), b = find(edges[k].second);
      if (a == b) tree = false;
      parent[a] = b;
      total += w(edges[k].first, edges[k].second);
    }
    if (tree) best = std::min(best, total);
  } while (std::next_permutation(pick.begin(), pick.end()));
  return best;
}

/// Shortest open path from `start` over all permutations of the other nodes.
inline double brute_force_tsp(const WeightMatrix& w, std::size_t start) {
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i != start) rest.push_back(i);
  }
  double best = rest.empty() ? 0.0 : kInfinity;
  do {
    double len = 0.0;
    std::size_t cur = start;
    for (std::size_t v : rest) len += w(cur, v), cur = v;
    best = std::min(best, len);
  } while (std::next_permutation(rest.begin(), rest.end()));
  return best;
}

/// Agent counts per node from merging the sequences f_i·d·1, f_i·d·2, ...
/// and taking the `agents` smallest terms (ties to the smaller f, then index).
inline std::vector<std::size_t> merged_progressions(const std::vector<double>& f, double d, std::size_t agents) {
  struct Term {
    double value, f;
    std::size_t node;
  };
  std::vector<Term> terms;
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t k = 1; k <= agents; ++k) terms.push_back({f[i] * d * static_cast<double>(k), f[i], i});
  }
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.f != b.f) return a.f < b.f;
    return a.node < b.node;
  });
  std::vector<std::size_t> counts(f.size(), 0);
  for (std::size_t i = 0; i < agents; ++i) ++counts[terms[i].node];
  return counts;
}

// ---------------------------------------------------------------------------
// Generators

inline std::vector<Point2> random_points(SplitMix64& rng, std::size_t n) {
  std::vector<Point2> pts(n);
  for (Point2& p : pts) p = {rng.uniform01(), rng.uniform01()};
  return pts;
}

inline ProblemInstance random_instance(std::uint64_t seed, std::size_t n, Variant v = Variant::regular) {
  const std::size_t extra = std::min<std::size_t>(400, n * (n - 1) / 2 - 3 * n);
  GraphSpec spec{n, v, 0.6, v == Variant::dense ? extra : 400, derive_seed(seed, {1})};
  return sample_instance(generate(spec), derive_seed(seed, {2}));
}

/// Random symmetric metric: shortest paths over random points' complete
/// graph, so the triangle inequality holds.
inline WeightMatrix random_metric(SplitMix64& rng, std::size_t n) {
  const std::vector<Point2> pts = random_points(rng, n);
  WeightMatrix w(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) w(i, j) = euclidean(pts[i], pts[j]);
  }
  return w;
}

inline double oracle_length(const ProblemInstance& inst) {
  return dijkstra(inst.graph, inst.start).distance[inst.goal];
}

/// Nodes a reference A* expands with f < C that `expanded` misses.
inline std::size_t missing_mandatory(const ProblemInstance& inst, const std::vector<NodeId>& expanded) {
  const AStarReference ref = reference_astar(inst.graph, inst.start, inst.goal);
  std::vector<char> seen(inst.graph.node_count(), 0);
  for (NodeId v : expanded) seen[v] = 1;
  std::size_t missing = 0;
  for (std::size_t i = 0; i < ref.expansion_order.size(); ++i) {
    if (ref.expansion_f[i] < ref.cost - 1e-9 && !seen[ref.expansion_order[i]]) ++missing;
  }
  return missing;
}

inline const std::vector<NavKind>& all_navs() {
  static const std::vector<NavKind> v{NavKind::tree, NavKind::known, NavKind::aerial, NavKind::pdfs,
                                      NavKind::ddfs, NavKind::adfs,  NavKind::iadfs};
  return v;
}

// ---------------------------------------------------------------------------
// Fixtures

inline ProblemInstance make_instance(std::vector<Point2> pts, std::vector<Edge> edges, NodeId s, NodeId g) {
  return ProblemInstance{PhysicalGraph(std::move(pts), std::move(edges)), s, g, 0};
}

/// Agent at C below node 1; target T below node 2; R is the root. Known
/// edges: R-1, R-2, 1-2, 1-C, 2-T.
struct TreeFigure {
  enum : NodeId { R, one, two, C, T, G };
  ProblemInstance inst = make_instance({{0.5, 0.0}, {0.3, 0.2}, {0.7, 0.2}, {0.2, 0.45}, {0.8, 0.45}, {0.5, 1.0}},
                                       {{R, one}, {R, two}, {one, two}, {one, C}, {two, T}, {T, G}}, R, G);

  /// Knowledge after expanding R, 1 and 2, with the agent standing on C.
  KnowledgeBase state() const {
    KnowledgeBase kb(inst);
    for (NodeId v : {R, one, two}) {
      kb.explore(v);
      kb.expand(v);
    }
    kb.explore(C);
    return kb;
  }
};

/// Agent at C, target 1. Both 2 and 5 lead from C to 1, and 5 is slightly
/// shorter; 2 is open in the search tree, 5 is not.
struct OpenNeighborFigure {
  enum : NodeId { S, C, one, two, five, G };
  ProblemInstance inst =
      make_instance({{0.5, 0.8}, {0.1, 0.5}, {0.9, 0.5}, {0.5, 0.62}, {0.5, 0.42}, {0.9, 0.95}},
                    {{S, C}, {S, two}, {S, one}, {C, two}, {C, five}, {two, one}, {five, one}, {one, G}}, S, G);

  KnowledgeBase state() const {
    KnowledgeBase kb(inst);
    kb.explore(S);
    kb.expand(S);
    kb.explore(C);
    return kb;
  }
};

/// Start between two clusters of dead-end nodes whose f values interleave,
/// so plain A* alternates sides; the goal hangs off a long detour so every
/// cluster node has f < C.
inline ProblemInstance two_cluster_instance(std::size_t per_side = 4) {
  std::vector<Point2> pts{{0.5, 0.5}, {0.5, 0.9}, {0.98, 0.98}};  // S, G, Q
  std::vector<Edge> edges{{0, 2}, {1, 2}};
  for (std::size_t i = 0; i < 2 * per_side; ++i) {
    const double x = i % 2 == 0 ? 0.15 : 0.85;
    pts.push_back({x, 0.48 - 0.015 * static_cast<double>(i)});
    edges.push_back({0, static_cast<NodeId>(pts.size() - 1)});
  }
  // Chain each side so a cluster is walkable without returning to S.
  for (std::size_t i = 2; i < 2 * per_side; ++i) {
    edges.push_back({static_cast<NodeId>(3 + i - 2), static_cast<NodeId>(3 + i)});
  }
  return make_instance(std::move(pts), std::move(edges), 0, 1);
}

}  // namespace testing_support
