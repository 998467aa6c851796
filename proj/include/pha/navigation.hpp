#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "pha/error.hpp"
#include "pha/knowledge.hpp"

namespace pha {

enum class NavKind { tree, known, aerial, pdfs, ddfs, adfs, iadfs };

inline std::string to_string(NavKind k) {
  switch (k) {
    case NavKind::tree: return "tree";
    case NavKind::known: return "known";
    case NavKind::aerial: return "aerial";
    case NavKind::pdfs: return "pdfs";
    case NavKind::ddfs: return "ddfs";
    case NavKind::adfs: return "adfs";
    case NavKind::iadfs: return "iadfs";
  }
  return "iadfs";
}

inline NavKind parse_nav(const std::string& s) {
  for (NavKind k : {NavKind::tree, NavKind::known, NavKind::aerial, NavKind::pdfs, NavKind::ddfs,
                    NavKind::adfs, NavKind::iadfs}) {
    if (to_string(k) == s) return k;
  }
  throw ArgumentError("unknown navigation policy '" + s + "'");
}

struct NavigationPolicy {
  NavKind kind = NavKind::iadfs;
  double c1 = 0.25;
  double c2 = 2.5;

  bool is_dfs() const noexcept {
    return kind == NavKind::pdfs || kind == NavKind::ddfs || kind == NavKind::adfs || kind == NavKind::iadfs;
  }

  void validate() const {
    if (!(c1 >= 0.0 && c1 < 1.0)) throw ArgumentError("c1 must lie in [0, 1)");
    if (!(c2 > 0.0)) throw ArgumentError("c2 must be positive");
  }
};

/// Priority of stepping from `current` to the adjacent `candidate` while
/// heading for `target`; smaller is better.
inline double step_key(const NavigationPolicy& policy, NodeId current, NodeId candidate, NodeId target,
                       const KnowledgeBase& kb) {
  if (!kb.known_weight(current, candidate)) {
    throw ContractViolation("step_key: no known edge " + std::to_string(current) + "-" +
                            std::to_string(candidate));
  }
  const Point2& c = kb.position(current);
  const Point2& n = kb.position(candidate);
  const Point2& t = kb.position(target);
  switch (policy.kind) {
    case NavKind::pdfs:
      return euclidean(n, t);
    case NavKind::ddfs: {
      double d = std::abs(std::atan2(n.y - c.y, n.x - c.x) - std::atan2(t.y - c.y, t.x - c.x));
      if (d > std::numbers::pi) d = 2.0 * std::numbers::pi - d;
      return d;
    }
    case NavKind::adfs:
    case NavKind::iadfs: {
      const double base = euclidean(c, n) + euclidean(n, t);
      if (policy.kind == NavKind::adfs || kb.status(candidate) != NodeStatus::open) return base;
      const double ratio = kb.record(target).f / kb.record(candidate).f;
      return base * (1.0 - policy.c1 * std::pow(ratio, policy.c2));
    }
    default:
      throw ContractViolation("step_key: " + to_string(policy.kind) + " is not a DFS policy");
  }
}

struct Route {
  std::vector<NodeId> nodes;  // from first to last node, inclusive
  double length = 0.0;
};

/// Walks up the search tree from `from` to the deepest common ancestor, then down to `to`.
inline Route tree_route(const KnowledgeBase& kb, NodeId from, NodeId to) {
  if (!kb.in_tree(from) || !kb.in_tree(to)) throw ContractViolation("tree_route: endpoint outside the search tree");
  std::unordered_set<NodeId> ancestors;
  for (NodeId u = to; u != kNoNode; u = kb.record(u).parent) ancestors.insert(u);
  Route r;
  NodeId meet = from;
  while (!ancestors.contains(meet)) {
    r.nodes.push_back(meet);
    meet = kb.record(meet).parent;
  }
  r.nodes.push_back(meet);
  std::vector<NodeId> down;
  for (NodeId u = to; u != meet; u = kb.record(u).parent) down.push_back(u);
  r.nodes.insert(r.nodes.end(), down.rbegin(), down.rend());
  for (std::size_t i = 1; i < r.nodes.size(); ++i) r.length += *kb.known_weight(r.nodes[i - 1], r.nodes[i]);
  return r;
}

/// Dijkstra over known edges, ties on distance broken by smaller predecessor id.
inline Route shortest_known_route(const KnowledgeBase& kb, NodeId from, NodeId to) {
  std::unordered_map<NodeId, double> dist;
  std::unordered_map<NodeId, NodeId> parent;
  std::unordered_set<NodeId> settled;
  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  dist[from] = 0.0;
  parent[from] = kNoNode;
  queue.push({0.0, from});
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (!settled.insert(u).second) continue;
    if (u == to) break;
    for (const Neighbor& nb : kb.known_neighbors(u)) {
      if (settled.contains(nb.node)) continue;
      const double nd = d + nb.weight;
      auto it = dist.find(nb.node);
      if (it == dist.end() || nd < it->second) {
        dist[nb.node] = nd;
        parent[nb.node] = u;
        queue.push({nd, nb.node});
      } else if (nd == it->second && u < parent[nb.node]) {
        parent[nb.node] = u;
      }
    }
  }
  if (!settled.contains(to)) {
    throw NavigationFailure("no known route from " + std::to_string(from) + " to " + std::to_string(to));
  }
  Route r;
  for (NodeId u = to; u != kNoNode; u = parent[u]) r.nodes.push_back(u);
  std::reverse(r.nodes.begin(), r.nodes.end());
  r.length = dist[to];
  return r;
}

inline double aerial_length(const KnowledgeBase& kb, NodeId from, NodeId to) {
  return euclidean(kb.position(from), kb.position(to));
}

/// One committed step: the agent travels `length` and arrives at `to`.
struct Move {
  NodeId to;
  double length;
};

/// Incremental navigation from one node to a target, one step at a time, so
/// that a simulation can interleave steps of several agents. Route-following
/// policies plan on construction; DFS policies decide at each node from the
/// knowledge available then.
class Navigator {
 public:
  Navigator(const NavigationPolicy& policy, const KnowledgeBase& kb, NodeId from, NodeId target)
      : policy_(policy), target_(target), current_(from) {
    if (!kb.in_tree(target)) throw ContractViolation("navigation target " + std::to_string(target) + " is unknown");
    switch (policy.kind) {
      case NavKind::tree: route_ = tree_route(kb, from, target).nodes; break;
      case NavKind::known: route_ = shortest_known_route(kb, from, target).nodes; break;
      case NavKind::aerial: break;
      default:
        stack_.push_back(from);
        visited_.insert(from);
    }
  }

  NodeId target() const noexcept { return target_; }
  NodeId current() const noexcept { return current_; }
  bool done() const noexcept { return current_ == target_; }

  /// The next step from the current node, or nullopt once at the target.
  std::optional<Move> next(const KnowledgeBase& kb) {
    if (done()) return std::nullopt;
    Move m{};
    if (policy_.kind == NavKind::aerial) {
      m = {target_, aerial_length(kb, current_, target_)};
    } else if (!policy_.is_dfs()) {
      const NodeId to = route_[++route_pos_];
      m = {to, *kb.known_weight(current_, to)};
    } else {
      m = dfs_step(kb);
    }
    current_ = m.to;
    return m;
  }

 private:
  Move dfs_step(const KnowledgeBase& kb) {
    const NodeId here = stack_.back();
    if (!kb.explored(here)) throw ContractViolation("DFS step from unexplored node " + std::to_string(here));
    NodeId best = kNoNode;
    double best_key = kInfinity;
    double best_w = 0.0;
    for (const Neighbor& nb : kb.known_neighbors(here)) {
      if (visited_.contains(nb.node)) continue;
      const double key = step_key(policy_, here, nb.node, target_, kb);
      if (best == kNoNode || key < best_key || (key == best_key && nb.node < best)) {
        best = nb.node;
        best_key = key;
        best_w = nb.weight;
      }
    }
    if (best != kNoNode) {
      visited_.insert(best);
      stack_.push_back(best);
      return {best, best_w};
    }
    stack_.pop_back();
    if (stack_.empty()) {
      throw NavigationFailure("target " + std::to_string(target_) + " unreachable by depth-first search");
    }
    return {stack_.back(), *kb.known_weight(here, stack_.back())};
  }

  NavigationPolicy policy_;
  NodeId target_;
  NodeId current_;
  std::vector<NodeId> route_;
  std::size_t route_pos_ = 0;
  std::vector<NodeId> stack_;
  std::unordered_set<NodeId> visited_;
};

struct Agent {
  int id = 0;
  NodeId location = kNoNode;
  double odometer = 0.0;
  std::optional<NodeId> assignment;
};

struct NavigationEpisode {
  int agent = 0;
  NodeId target = kNoNode;
  std::vector<NodeId> traversed;  // starts at the departure node
  double distance = 0.0;
  std::vector<NodeId> explored;
};

/// Called after every arrival (including backtracking steps) once the
/// arrival node has been explored.
using ArrivalHook = std::function<void(const Agent&, const Move&, bool newly_explored)>;

/// Runs a whole episode: moves the agent to `target`, exploring every node entered.
inline NavigationEpisode navigate(Agent& agent, NodeId target, KnowledgeBase& kb, const NavigationPolicy& policy,
                                  const ArrivalHook& on_arrival = {}) {
  NavigationEpisode ep{agent.id, target, {agent.location}, 0.0, {}};
  kb.explore(agent.location);
  Navigator nav(policy, kb, agent.location, target);
  while (auto mv = nav.next(kb)) {
    agent.location = mv->to;
    agent.odometer += mv->length;
    ep.distance += mv->length;
    ep.traversed.push_back(mv->to);
    const bool newly = !kb.explored(mv->to);
    kb.explore(mv->to);
    if (newly) ep.explored.push_back(mv->to);
    if (on_arrival) on_arrival(agent, *mv, newly);
  }
  return ep;
}

}  // namespace pha
