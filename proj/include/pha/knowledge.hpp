#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pha/error.hpp"
#include "pha/generate.hpp"
#include "pha/graph.hpp"

namespace pha {

enum class NodeStatus : std::uint8_t { unknown, open, expanded, closed };

inline const char* to_string(NodeStatus s) {
  switch (s) {
    case NodeStatus::unknown: return "unknown";
    case NodeStatus::open: return "open";
    case NodeStatus::expanded: return "expanded";
    case NodeStatus::closed: return "closed";
  }
  return "unknown";
}

struct NodeRecord {
  NodeId node = kNoNode;
  double g = kInfinity;
  double h = 0.0;
  double f = kInfinity;
  NodeId parent = kNoNode;
  NodeStatus status = NodeStatus::unknown;
  bool explored = false;
};

/// What the agents collectively know about the environment.
///
/// Exploration (an agent standing on a node) reveals the node's incident
/// edges; expansion (the high level) turns revealed edges into search-tree
/// links. The two are kept apart: exploring never changes any g or f.
///
/// The open list holds two kinds of entries. Status `open` nodes are
/// generated but not expanded; status `expanded` nodes have had their
/// successors generated but wait to be closed until every entry with a
/// smaller (f, id) key is expanded too. Only the closing step certifies g.
///
/// The ground-truth graph is held by reference and consulted only inside
/// explore(); it must outlive the knowledge base.
class KnowledgeBase {
 public:
  explicit KnowledgeBase(const ProblemInstance& instance)
      : world_(&instance.graph), start_(instance.start), goal_(instance.goal) {
    const std::size_t n = world_->node_count();
    if (!world_->contains(start_) || !world_->contains(goal_)) {
      throw ArgumentError("instance start/goal outside the graph");
    }
    if (start_ == goal_) throw ArgumentError("instance start equals goal");
    records_.resize(n);
    known_.resize(n);
    for (std::size_t i = 0; i < n; ++i) records_[i].node = static_cast<NodeId>(i);
    NodeRecord& s = records_[start_];
    s.g = 0.0;
    s.h = heuristic(start_);
    s.f = s.g + s.h;
    s.status = NodeStatus::open;
    open_.insert({s.f, start_});
  }

  NodeId start() const noexcept { return start_; }
  NodeId goal() const noexcept { return goal_; }
  std::size_t node_capacity() const noexcept { return records_.size(); }

  const NodeRecord& record(NodeId v) const { return records_.at(index(v)); }
  NodeStatus status(NodeId v) const { return record(v).status; }
  bool explored(NodeId v) const { return record(v).explored; }
  bool in_tree(NodeId v) const { return record(v).status != NodeStatus::unknown; }

  /// Node coordinates. Callers only ask for nodes they have discovered.
  const Point2& position(NodeId v) const { return world_->position(v); }

  double heuristic(NodeId v) const { return euclidean(position(v), position(goal_)); }

  /// Edges incident to `v` that are known: all of them if v is explored,
  /// otherwise those leading to explored neighbours.
  std::span<const Neighbor> known_neighbors(NodeId v) const { return known_.at(index(v)); }

  std::optional<double> known_weight(NodeId u, NodeId v) const {
    for (const Neighbor& nb : known_neighbors(u)) {
      if (nb.node == v) return nb.weight;
    }
    return std::nullopt;
  }

  /// Reveals v's neighbours and incident edges. Returns the neighbour list,
  /// or an empty list when v was already explored.
  std::vector<NodeId> explore(NodeId v) {
    NodeRecord& rec = records_.at(index(v));
    if (rec.explored) return {};
    rec.explored = true;
    ++explored_count_;
    std::vector<NodeId> revealed;
    for (const Neighbor& nb : world_->neighbors(v)) {
      revealed.push_back(nb.node);
      if (records_[nb.node].explored) continue;  // edge already known from the other side
      known_[v].push_back(nb);
      known_[nb.node].push_back({v, nb.weight});
    }
    return revealed;
  }

  /// Generates v's successors. Returns nodes whose g was set or lowered,
  /// including ones reached by propagating an improvement through
  /// already-expanded nodes.
  std::vector<NodeId> expand(NodeId v) {
    NodeRecord& rec = records_.at(index(v));
    if (!rec.explored) throw ContractViolation("expand: node " + std::to_string(v) + " is unexplored");
    if (rec.status != NodeStatus::open) {
      throw ContractViolation("expand: node " + std::to_string(v) + " is " + to_string(rec.status));
    }
    open_.erase({rec.f, v});
    rec.status = NodeStatus::expanded;
    pending_.insert({rec.f, v});
    expansion_order_.push_back(v);

    std::vector<NodeId> changed;
    std::vector<NodeId> work{v};
    while (!work.empty()) {
      const NodeId u = work.back();
      work.pop_back();
      const double gu = records_[u].g;
      for (const Neighbor& nb : known_[u]) relax(nb.node, gu + nb.weight, u, changed, work);
    }
    std::sort(changed.begin(), changed.end());
    changed.erase(std::unique(changed.begin(), changed.end()), changed.end());
    return changed;
  }

  /// Closes expanded nodes while the smallest (f, id) entry of the open list
  /// is an expanded one. Stops once the goal is closed, since the search ends
  /// there. Returns the closed nodes in closing order.
  std::vector<NodeId> close_eligible() {
    std::vector<NodeId> closed;
    while (!goal_closed() && !pending_.empty() && (open_.empty() || *pending_.begin() < *open_.begin())) {
      const auto [f, v] = *pending_.begin();
      pending_.erase(pending_.begin());
      records_[v].status = NodeStatus::closed;
      closed_order_.push_back(v);
      closed_f_.push_back(f);
      closed.push_back(v);
    }
    return closed;
  }

  /// The k smallest-(f, id) nodes with status open.
  std::vector<NodeId> select_window(std::size_t k) const {
    if (k == 0) throw ArgumentError("window size must be at least 1");
    std::vector<NodeId> window;
    for (auto it = open_.begin(); it != open_.end() && window.size() < k; ++it) window.push_back(it->second);
    return window;
  }

  /// The open-status nodes among the k smallest-(f, id) open-list entries,
  /// where expanded-not-closed entries take up window slots too.
  std::vector<NodeId> select_window_in_open_list(std::size_t k) const {
    if (k == 0) throw ArgumentError("window size must be at least 1");
    std::vector<NodeId> window;
    auto a = open_.begin();
    auto b = pending_.begin();
    for (std::size_t taken = 0; taken < k && (a != open_.end() || b != pending_.end()); ++taken) {
      if (b == pending_.end() || (a != open_.end() && *a < *b)) {
        window.push_back((a++)->second);
      } else {
        ++b;
      }
    }
    return window;
  }

  bool goal_closed() const { return records_[goal_].status == NodeStatus::closed; }
  /// True when neither unexpanded nor expanded-not-closed entries remain.
  bool open_list_empty() const noexcept { return open_.empty() && pending_.empty(); }
  std::size_t open_count() const noexcept { return open_.size(); }
  std::size_t pending_count() const noexcept { return pending_.size(); }

  std::size_t explored_count() const noexcept { return explored_count_; }
  const std::vector<NodeId>& expansion_order() const noexcept { return expansion_order_; }
  const std::vector<NodeId>& closed_order() const noexcept { return closed_order_; }
  const std::vector<double>& closed_f() const noexcept { return closed_f_; }

  /// Start-to-v path through the search tree.
  PathResult tree_path_from_start(NodeId v) const {
    if (!in_tree(v)) throw ContractViolation("node " + std::to_string(v) + " is not in the search tree");
    PathResult path;
    for (NodeId u = v; u != kNoNode; u = records_[u].parent) path.nodes.push_back(u);
    std::reverse(path.nodes.begin(), path.nodes.end());
    path.length = records_[v].g;
    return path;
  }

 private:
  std::size_t index(NodeId v) const {
    if (v < 0 || static_cast<std::size_t>(v) >= records_.size()) {
      throw ArgumentError("invalid node id " + std::to_string(v));
    }
    return static_cast<std::size_t>(v);
  }

  void relax(NodeId m, double g_new, NodeId via, std::vector<NodeId>& changed, std::vector<NodeId>& work) {
    NodeRecord& rec = records_[m];
    switch (rec.status) {
      case NodeStatus::unknown:
        rec.g = g_new;
        rec.h = heuristic(m);
        rec.f = rec.g + rec.h;
        rec.parent = via;
        rec.status = NodeStatus::open;
        open_.insert({rec.f, m});
        changed.push_back(m);
        return;
      case NodeStatus::open:
        if (g_new < rec.g - 1e-12) {
          open_.erase({rec.f, m});
          rec.g = g_new;
          rec.f = rec.g + rec.h;
          rec.parent = via;
          open_.insert({rec.f, m});
          changed.push_back(m);
        }
        return;
      case NodeStatus::expanded:
        if (g_new < rec.g - 1e-12) {
          pending_.erase({rec.f, m});
          rec.g = g_new;
          rec.f = rec.g + rec.h;
          rec.parent = via;
          pending_.insert({rec.f, m});
          changed.push_back(m);
          work.push_back(m);  // re-expand to pass the improvement on
        }
        return;
      case NodeStatus::closed:
        if (g_new < rec.g - kLengthTolerance) {
          throw ContractViolation("closed node " + std::to_string(m) + " would be reopened");
        }
        return;
    }
  }

  const PhysicalGraph* world_;
  NodeId start_;
  NodeId goal_;
  std::vector<NodeRecord> records_;
  std::vector<std::vector<Neighbor>> known_;
  std::set<std::pair<double, NodeId>> open_;
  std::set<std::pair<double, NodeId>> pending_;
  std::vector<NodeId> expansion_order_;
  std::vector<NodeId> closed_order_;
  std::vector<double> closed_f_;
  std::size_t explored_count_ = 0;
};

}  // namespace pha
