#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <vector>

#include "pha/error.hpp"
#include "pha/graph.hpp"
#include "pha/high_level.hpp"

namespace pha {

/// Dense symmetric matrix of pairwise distances.
class WeightMatrix {
 public:
  explicit WeightMatrix(std::size_t n = 0) : n_(n), data_(n * n, 0.0) {}
  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

 private:
  std::size_t n_;
  std::vector<double> data_;
};

/// Complete graph over `nodes` weighted by shortest-path length in `graph`.
inline WeightMatrix closed_complete_graph(const PhysicalGraph& graph, const std::vector<NodeId>& nodes) {
  if (nodes.empty()) throw ArgumentError("closed set is empty");
  WeightMatrix w(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const ShortestPathTree tree = dijkstra(graph, nodes[i]);
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const double d = tree.distance[nodes[j]];
      if (d == kInfinity) {
        throw std::runtime_error("closed nodes " + std::to_string(nodes[i]) + " and " + std::to_string(nodes[j]) +
                                 " are disconnected");
      }
      w(i, j) = d;
    }
  }
  // Two Dijkstra runs may differ in the last bit; keep the matrix exactly symmetric.
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    w(i, i) = 0.0;
    for (std::size_t j = i + 1; j < nodes.size(); ++j) w(i, j) = w(j, i) = std::min(w(i, j), w(j, i));
  }
  return w;
}

namespace detail {

// Prim over the listed indices.
inline double prim(const WeightMatrix& w, const std::vector<std::size_t>& use) {
  if (use.size() < 2) return 0.0;
  std::vector<double> key(use.size(), kInfinity);
  std::vector<char> in(use.size(), 0);
  key[0] = 0.0;
  double total = 0.0;
  for (std::size_t it = 0; it < use.size(); ++it) {
    std::size_t u = use.size();
    for (std::size_t i = 0; i < use.size(); ++i) {
      if (!in[i] && (u == use.size() || key[i] < key[u])) u = i;
    }
    in[u] = 1;
    total += key[u];
    for (std::size_t i = 0; i < use.size(); ++i) {
      if (!in[i]) key[i] = std::min(key[i], w(use[u], use[i]));
    }
  }
  return total;
}

}  // namespace detail

inline double mst_weight(const WeightMatrix& w) {
  if (w.size() == 0) throw ArgumentError("mst of an empty set");
  std::vector<std::size_t> all(w.size());
  std::iota(all.begin(), all.end(), 0);
  return detail::prim(w, all);
}

struct OpenTour {
  double length = 0.0;
  std::vector<std::size_t> order;  // starts with the start index
};

inline constexpr std::size_t kDefaultTspCap = 14;

/// Exact shortest Hamiltonian path from `start` with a free end. Depth-first
/// branch and bound: nearest-neighbour seed tour, children tried nearest
/// first, pruned by partial length + MST of {current} ∪ unvisited, and by a
/// (visited set, current) memo of the shortest partial length seen.
inline OpenTour tsp_open_path(const WeightMatrix& w, std::size_t start, std::size_t cap = kDefaultTspCap) {
  const std::size_t n = w.size();
  if (n == 0) throw ArgumentError("tsp of an empty set");
  if (start >= n) throw ArgumentError("tsp start index out of range");
  if (n > cap || n > 58) throw SizeError("closed set of " + std::to_string(n) + " nodes exceeds the tsp cap");
  if (n == 1) return {0.0, {start}};

  OpenTour best;
  {
    std::vector<char> seen(n, 0);
    best.order.push_back(start);
    seen[start] = 1;
    for (std::size_t step = 1; step < n; ++step) {
      const std::size_t cur = best.order.back();
      std::size_t nxt = n;
      for (std::size_t j = 0; j < n; ++j) {
        if (!seen[j] && (nxt == n || w(cur, j) < w(cur, nxt))) nxt = j;
      }
      best.length += w(cur, nxt);
      seen[nxt] = 1;
      best.order.push_back(nxt);
    }
  }

  std::vector<std::size_t> path{start};
  std::vector<std::vector<std::size_t>> by_distance(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) by_distance[i].push_back(j);
    }
    std::stable_sort(by_distance[i].begin(), by_distance[i].end(),
                     [&](std::size_t a, std::size_t b) { return w(i, a) < w(i, b); });
  }
  struct KeyHash {
    std::size_t operator()(std::uint64_t k) const noexcept { return SplitMix64::finalize(k); }
  };
  std::unordered_map<std::uint64_t, double, KeyHash> memo;
  std::vector<std::size_t> rest;

  auto search = [&](auto&& self, std::uint64_t mask, std::size_t cur, double length) -> void {
    if (path.size() == n) {
      if (length < best.length) {
        best.length = length;
        best.order = path;
      }
      return;
    }
    const std::uint64_t key = (mask << 6) | cur;
    if (auto it = memo.find(key); it != memo.end() && it->second <= length) return;
    memo[key] = length;
    rest.assign(1, cur);
    for (std::size_t j = 0; j < n; ++j) {
      if (!(mask >> j & 1)) rest.push_back(j);
    }
    if (length + detail::prim(w, rest) >= best.length) return;
    for (std::size_t j : by_distance[cur]) {
      if (mask >> j & 1) continue;
      const double next = length + w(cur, j);
      if (next >= best.length) continue;
      path.push_back(j);
      self(self, mask | (std::uint64_t{1} << j), j, next);
      path.pop_back();
    }
  };
  search(search, std::uint64_t{1} << start, start, 0.0);
  return best;
}

struct ClosedSetMetric {
  std::vector<NodeId> closed;
  WeightMatrix weights;
  double mst = 0.0;
  std::optional<double> tsp;
  double fuel = 0.0;
  std::optional<double> ratio_tsp;
  double ratio_mst = 0.0;
};

/// Compares a run's fuel with the cheapest ways to visit its closed set.
inline ClosedSetMetric evaluate_run(const RunMetrics& run, const ProblemInstance& inst,
                                    std::size_t tsp_cap = kDefaultTspCap) {
  if (!run.success) throw ArgumentError("evaluate_run needs a successful run");
  ClosedSetMetric out;
  out.closed = run.closed_nodes;
  // An f tie can close the goal before the start; the tour still begins there.
  if (std::find(out.closed.begin(), out.closed.end(), inst.start) == out.closed.end()) {
    out.closed.insert(out.closed.begin(), inst.start);
  }
  const auto s = std::find(out.closed.begin(), out.closed.end(), inst.start);
  out.weights = closed_complete_graph(inst.graph, out.closed);
  out.mst = mst_weight(out.weights);
  out.fuel = run.total_fuel;
  out.ratio_mst = out.mst > 0.0 ? out.fuel / out.mst : 0.0;
  if (out.closed.size() <= tsp_cap) {
    out.tsp = tsp_open_path(out.weights, static_cast<std::size_t>(s - out.closed.begin()), tsp_cap).length;
    if (*out.tsp > 0.0) out.ratio_tsp = out.fuel / *out.tsp;
  }
  return out;
}

}  // namespace pha
