#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pha/error.hpp"
#include "pha/knowledge.hpp"
#include "pha/navigation.hpp"
#include "pha/rng.hpp"

namespace pha {

enum class HighKind { astar, wina };

inline std::string to_string(HighKind k) { return k == HighKind::astar ? "astar" : "wina"; }

inline HighKind parse_high(const std::string& s) {
  if (s == "astar") return HighKind::astar;
  if (s == "wina") return HighKind::wina;
  throw ArgumentError("unknown high-level policy '" + s + "'");
}

inline std::size_t default_window(std::size_t node_count) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(static_cast<double>(node_count) / 50.0)));
}

/// What the k window slots are drawn from. `open_list`: the k smallest
/// entries of the whole open list, expanded-not-closed ones included, keeping
/// only the unexpanded ones. `unexpanded`: the k smallest unexpanded nodes.
enum class WindowScope { open_list, unexpanded };

inline std::string to_string(WindowScope s) { return s == WindowScope::open_list ? "open-list" : "unexpanded"; }

inline WindowScope parse_window_scope(const std::string& s) {
  if (s == "open-list") return WindowScope::open_list;
  if (s == "unexpanded") return WindowScope::unexpanded;
  throw ArgumentError("unknown window scope '" + s + "'");
}

struct HighLevelPolicy {
  HighKind kind = HighKind::wina;
  std::size_t window = 0;  // 0 selects default_window(n)
  WindowScope scope = WindowScope::open_list;

  std::size_t window_for(std::size_t node_count) const {
    if (kind == HighKind::astar) return 1;
    return window == 0 ? default_window(node_count) : window;
  }

  std::vector<NodeId> select(const KnowledgeBase& kb, std::size_t k) const {
    return scope == WindowScope::open_list ? kb.select_window_in_open_list(k) : kb.select_window(k);
  }
};

inline double wina_cost(double f, double dist) { return f * dist; }

struct TraceEvent {
  std::string kind;  // explore | expand | close | assign | move
  double clock = 0.0;
  double fuel = 0.0;
  int agent = -1;
  NodeId node = kNoNode;
};

struct EpisodeRecord {
  int agent = 0;
  NodeId from = kNoNode;
  NodeId target = kNoNode;
  double distance = 0.0;
  std::size_t steps = 0;
};

/// Route lengths of the three route-following policies from one state.
struct RouteAudit {
  std::size_t episodes = 0;
  std::size_t violations = 0;
};

struct RunMetrics {
  bool success = false;
  PathResult path;
  std::vector<double> agent_fuel;
  double total_fuel = 0.0;
  double elapsed_time = 0.0;
  std::size_t explored = 0;
  std::size_t expanded = 0;
  std::size_t closed = 0;
  std::vector<NodeId> closed_nodes;
  std::vector<NodeId> expansion_order;
  std::vector<EpisodeRecord> episodes;
  RouteAudit audit;
  std::vector<TraceEvent> trace;

  double c_total(double w_t, double w_f) const { return w_t * elapsed_time + w_f * total_fuel; }
};

struct RunOptions {
  bool record_trace = false;
  bool audit_routes = false;     // compare aerial/known/tree route lengths before every episode
  std::uint64_t seed = 0;        // drives random agent tie-breaks
  std::size_t max_cycles = 0;    // 0 picks a bound from the graph size
};

namespace detail {

class Recorder {
 public:
  explicit Recorder(bool on) : on_(on) {}
  void operator()(const char* kind, double clock, double fuel, int agent, NodeId node) {
    if (on_) events_.push_back({kind, clock, fuel, agent, node});
  }
  std::vector<TraceEvent> take() { return std::move(events_); }

 private:
  bool on_;
  std::vector<TraceEvent> events_;
};

inline void audit_episode(const KnowledgeBase& kb, NodeId from, NodeId to, RouteAudit& audit) {
  if (!kb.in_tree(from)) return;
  ++audit.episodes;
  const double aerial = aerial_length(kb, from, to);
  const double known = shortest_known_route(kb, from, to).length;
  const double tree = tree_route(kb, from, to).length;
  if (aerial > known + kLengthTolerance || known > tree + kLengthTolerance) ++audit.violations;
}

inline void finish(RunMetrics& m, const KnowledgeBase& kb, const std::vector<Agent>& agents) {
  m.success = kb.goal_closed();
  if (m.success) m.path = kb.tree_path_from_start(kb.goal());
  m.agent_fuel.clear();
  m.total_fuel = 0.0;
  for (const Agent& a : agents) {
    m.agent_fuel.push_back(a.odometer);
    m.total_fuel += a.odometer;
  }
  m.explored = kb.explored_count();
  m.expansion_order = kb.expansion_order();
  m.expanded = m.expansion_order.size();
  m.closed_nodes = kb.closed_order();
  m.closed = m.closed_nodes.size();
}

inline std::size_t cycle_bound(const ProblemInstance& inst, const RunOptions& opt) {
  return opt.max_cycles ? opt.max_cycles : 64 * (inst.graph.node_count() + inst.graph.edge_count()) + 1024;
}

}  // namespace detail

/// Picks the (agent, node) pair with the smallest f·dist. Explored nodes count
/// as distance 0. Node ties go to smaller (f, id); agents tied on the best
/// node are chosen between with `rng`, which is only drawn on a real tie.
inline std::pair<std::size_t, NodeId> fuel_allocate(const std::vector<Agent>& agents, const std::vector<NodeId>& window,
                                                    const KnowledgeBase& kb, SplitMix64& rng) {
  if (window.empty()) throw ArgumentError("fuel_allocate: empty window");
  if (agents.empty()) throw ArgumentError("fuel_allocate: no agents");
  double best = kInfinity;
  NodeId best_node = kNoNode;
  std::vector<std::size_t> tied;
  for (NodeId n : window) {  // window is sorted by (f, id)
    const double f = kb.record(n).f;
    for (std::size_t a = 0; a < agents.size(); ++a) {
      const double dist = kb.explored(n) ? 0.0 : euclidean(kb.position(agents[a].location), kb.position(n));
      const double c = wina_cost(f, dist);
      if (c < best) {
        best = c;
        best_node = n;
        tied.assign(1, a);
      } else if (c == best && n == best_node) {
        tied.push_back(a);
      }
    }
  }
  const std::size_t pick = tied.size() == 1 ? tied[0] : tied[rng.below(tied.size())];
  return {pick, best_node};
}

/// Sequential PHA*: each cycle one agent travels to one target and the
/// navigation runs to completion before the next decision. With one agent
/// this is single-agent PHA*; with several it is fuel-efficient MAPHA*.
inline RunMetrics run_sequential(const ProblemInstance& inst, std::size_t agent_count, const HighLevelPolicy& high,
                                 const NavigationPolicy& nav, const RunOptions& opt = {}) {
  if (agent_count < 1) throw ArgumentError("need at least one agent");
  nav.validate();
  KnowledgeBase kb(inst);
  SplitMix64 rng(opt.seed);
  detail::Recorder rec(opt.record_trace);
  RunMetrics m;
  std::vector<Agent> agents(agent_count);
  for (std::size_t i = 0; i < agent_count; ++i) agents[i] = Agent{static_cast<int>(i), inst.start, 0.0, {}};
  double fuel = 0.0;

  kb.explore(inst.start);
  rec("explore", 0.0, 0.0, 0, inst.start);
  const std::size_t k = high.window_for(inst.graph.node_count());
  const std::size_t bound = detail::cycle_bound(inst, opt);
  for (std::size_t cycle = 0;; ++cycle) {
    if (cycle > bound) throw std::runtime_error("simulation exceeded its cycle bound");
    for (NodeId c : kb.close_eligible()) rec("close", fuel, fuel, -1, c);
    if (kb.goal_closed()) break;
    const std::vector<NodeId> window = high.select(kb, k);
    if (window.empty()) break;

    const auto [ai, target] = fuel_allocate(agents, window, kb, rng);
    Agent& agent = agents[ai];
    if (!kb.explored(target)) {
      rec("assign", fuel, fuel, agent.id, target);
      if (opt.audit_routes) detail::audit_episode(kb, agent.location, target, m.audit);
      EpisodeRecord ep{agent.id, agent.location, target, 0.0, 0};
      navigate(agent, target, kb, nav, [&](const Agent& a, const Move& mv, bool fresh) {
        fuel += mv.length;
        ep.distance += mv.length;
        ++ep.steps;
        rec("move", fuel, fuel, a.id, mv.to);
        if (fresh) rec("explore", fuel, fuel, a.id, mv.to);
      });
      m.episodes.push_back(ep);
    }
    kb.expand(target);
    rec("expand", fuel, fuel, agent.id, target);
  }
  detail::finish(m, kb, agents);
  m.elapsed_time = m.total_fuel;
  m.trace = rec.take();
  return m;
}

inline RunMetrics run_single_agent(const ProblemInstance& inst, const HighLevelPolicy& high, const NavigationPolicy& nav,
                                   const RunOptions& opt = {}) {
  return run_sequential(inst, 1, high, nav, opt);
}

}  // namespace pha
