#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "pha/error.hpp"
#include "pha/high_level.hpp"
#include "pha/knowledge.hpp"
#include "pha/navigation.hpp"

namespace pha {

enum class Mode { single, fuel, time, combined_simple, combined_improved };

inline std::string to_string(Mode m) {
  switch (m) {
    case Mode::single: return "single";
    case Mode::fuel: return "fuel";
    case Mode::time: return "time";
    case Mode::combined_simple: return "combined-simple";
    case Mode::combined_improved: return "combined-improved";
  }
  return "single";
}

inline Mode parse_mode(const std::string& s) {
  for (Mode m : {Mode::single, Mode::fuel, Mode::time, Mode::combined_simple, Mode::combined_improved}) {
    if (to_string(m) == s) return m;
  }
  throw ArgumentError("unknown mode '" + s + "'");
}

struct CostWeights {
  double time = 1.0;
  double fuel = 0.0;

  void validate() const {
    if (!(time >= 0.0 && time <= 1.0 && fuel >= 0.0 && fuel <= 1.0) || std::abs(time + fuel - 1.0) > 1e-12) {
      throw ArgumentError("cost weights must lie in [0, 1] and sum to 1");
    }
  }
};

struct AgentPosition {
  int id;
  Point2 at;
};

struct AllocationRound {
  std::vector<NodeId> window;
  std::vector<std::size_t> counts;                  // parallel to window
  std::vector<std::pair<int, NodeId>> assignment;   // agent id -> node, in allocation order
};

/// Greedy distribution of agents over window nodes: each agent in turn takes
/// the node minimizing f·dist·(count+1). Counts start at zero every round.
/// `window` must be in (f, id) order so the first minimum wins ties.
inline AllocationRound time_allocate(const std::vector<AgentPosition>& agents, const std::vector<NodeId>& window,
                                     const KnowledgeBase& kb) {
  AllocationRound round{window, std::vector<std::size_t>(window.size(), 0), {}};
  if (window.empty()) return round;
  for (const AgentPosition& a : agents) {
    std::size_t best = 0;
    double best_cost = kInfinity;
    for (std::size_t i = 0; i < window.size(); ++i) {
      const double c = kb.record(window[i]).f * euclidean(a.at, kb.position(window[i])) *
                       static_cast<double>(round.counts[i] + 1);
      if (c < best_cost) {
        best_cost = c;
        best = i;
      }
    }
    ++round.counts[best];
    round.assignment.push_back({a.id, window[best]});
  }
  return round;
}

/// Chooses which `m` agents move: repeatedly takes the globally cheapest
/// (agent, node) pair under the allocation product, bumping that node's count.
/// Ties go to the smaller product, then the earlier window node, then the
/// smaller agent id. Returns the chosen agents in id order.
inline std::vector<AgentPosition> select_movers(const std::vector<AgentPosition>& agents,
                                                const std::vector<NodeId>& window, const KnowledgeBase& kb,
                                                std::size_t m) {
  if (m >= agents.size() || window.empty()) return agents;
  std::vector<std::size_t> counts(window.size(), 0);
  std::vector<char> taken(agents.size(), 0);
  for (std::size_t round = 0; round < m; ++round) {
    double best_cost = kInfinity;
    std::size_t best_agent = agents.size();
    std::size_t best_node = 0;
    for (std::size_t i = 0; i < window.size(); ++i) {
      const double f = kb.record(window[i]).f;
      const Point2& at = kb.position(window[i]);
      for (std::size_t a = 0; a < agents.size(); ++a) {
        if (taken[a]) continue;
        const double c = f * euclidean(agents[a].at, at) * static_cast<double>(counts[i] + 1);
        if (c < best_cost || (c == best_cost && i == best_node && agents[a].id < agents[best_agent].id)) {
          best_cost = c;
          best_agent = a;
          best_node = i;
        }
      }
    }
    taken[best_agent] = 1;
    ++counts[best_node];
  }
  std::vector<AgentPosition> chosen;
  for (std::size_t a = 0; a < agents.size(); ++a) {
    if (taken[a]) chosen.push_back(agents[a]);
  }
  return chosen;
}

namespace detail {

struct Mover {
  Agent agent;
  std::optional<Navigator> nav;
  std::optional<Move> leg;
  double progress = 0.0;
  std::size_t episode = 0;
};

}  // namespace detail

/// Time-driven MAPHA*: all agents with a target move at unit speed, one edge
/// at a time. Each node arrival explores the node, expands open nodes standing
/// under an agent and runs the closing loop. Agents are redistributed over the
/// window whenever some mover's target stops being a window node that still
/// needs exploring; a redirected agent finishes its current edge and starts a
/// fresh episode from there. `movers` caps how many agents get targets.
inline RunMetrics run_time_engine(const ProblemInstance& inst, std::size_t agent_count, std::size_t movers,
                                  const HighLevelPolicy& high, const NavigationPolicy& nav,
                                  const RunOptions& opt = {}) {
  if (agent_count < 1) throw ArgumentError("need at least one agent");
  if (movers < 1 || movers > agent_count) throw ArgumentError("movers must lie in [1, agents]");
  nav.validate();
  KnowledgeBase kb(inst);
  detail::Recorder rec(opt.record_trace);
  RunMetrics m;
  std::vector<detail::Mover> team(agent_count);
  for (std::size_t i = 0; i < agent_count; ++i) team[i].agent = Agent{static_cast<int>(i), inst.start, 0.0, {}};
  double clock = 0.0;
  double fuel = 0.0;

  auto position = [&](const detail::Mover& w) {
    const Point2& here = kb.position(w.agent.location);
    if (!w.leg) return here;
    return lerp(here, kb.position(w.leg->to), w.progress / w.leg->length);
  };
  auto expand_occupied = [&] {
    for (const detail::Mover& w : team) {
      if (w.leg) continue;
      const NodeId v = w.agent.location;
      if (kb.status(v) == NodeStatus::open && kb.explored(v)) {
        kb.expand(v);
        rec("expand", clock, fuel, w.agent.id, v);
      }
    }
  };

  kb.explore(inst.start);
  rec("explore", 0.0, 0.0, 0, inst.start);
  expand_occupied();
  const std::size_t k = high.window_for(inst.graph.node_count());
  const std::size_t bound = detail::cycle_bound(inst, opt) * (agent_count + 1);
  std::vector<NodeId> window;
  for (std::size_t event = 0;; ++event) {
    if (event > bound) throw std::runtime_error("simulation exceeded its event bound");
    bool finished = false;
    for (;;) {
      for (NodeId c : kb.close_eligible()) rec("close", clock, fuel, -1, c);
      if (kb.goal_closed()) {
        finished = true;
        break;
      }
      window = high.select(kb, k);
      if (window.empty()) {
        finished = true;
        break;
      }
      auto free_node = std::find_if(window.begin(), window.end(), [&](NodeId v) { return kb.explored(v); });
      if (free_node == window.end()) break;
      kb.expand(*free_node);
      rec("expand", clock, fuel, -1, *free_node);
    }
    if (finished) break;

    auto valid = [&](const detail::Mover& w) {
      if (!w.agent.assignment) return false;
      const NodeId t = *w.agent.assignment;
      return kb.status(t) == NodeStatus::open && !kb.explored(t) &&
             std::find(window.begin(), window.end(), t) != window.end();
    };
    bool realloc = false;
    std::size_t assigned = 0;
    for (const detail::Mover& w : team) {
      if (w.agent.assignment) {
        ++assigned;
        if (!valid(w)) realloc = true;
      }
    }
    if (assigned < movers) realloc = true;
    if (realloc) {
      std::vector<AgentPosition> pos;
      for (const detail::Mover& w : team) pos.push_back({w.agent.id, position(w)});
      const AllocationRound round = time_allocate(select_movers(pos, window, kb, movers), window, kb);
      std::vector<std::optional<NodeId>> next(agent_count);
      for (const auto& [id, node] : round.assignment) next[static_cast<std::size_t>(id)] = node;
      for (std::size_t i = 0; i < agent_count; ++i) {
        detail::Mover& w = team[i];
        if (w.agent.assignment == next[i]) continue;
        w.agent.assignment = next[i];
        w.nav.reset();
        if (next[i]) rec("assign", clock, fuel, w.agent.id, *next[i]);
      }
    }

    double dt = kInfinity;
    for (detail::Mover& w : team) {
      if (!w.leg && w.agent.assignment) {
        if (!w.nav) {
          if (opt.audit_routes) detail::audit_episode(kb, w.agent.location, *w.agent.assignment, m.audit);
          w.nav.emplace(nav, kb, w.agent.location, *w.agent.assignment);
          w.episode = m.episodes.size();
          m.episodes.push_back({w.agent.id, w.agent.location, *w.agent.assignment, 0.0, 0});
        }
        w.leg = w.nav->next(kb);
        if (!w.leg) throw ContractViolation("mover already stands on its unexplored target");
        w.progress = 0.0;
      }
      if (w.leg) dt = std::min(dt, w.leg->length - w.progress);
    }
    if (dt == kInfinity) throw ContractViolation("no agent can move while the window is non-empty");

    clock += dt;
    std::vector<std::size_t> arrived;
    for (std::size_t i = 0; i < agent_count; ++i) {
      detail::Mover& w = team[i];
      if (!w.leg) continue;
      const double remaining = w.leg->length - w.progress;
      const double step = remaining - dt <= 1e-12 ? remaining : dt;
      w.agent.odometer += step;
      fuel += step;
      w.progress += step;
      if (step == remaining) arrived.push_back(i);
    }
    for (std::size_t i : arrived) {
      detail::Mover& w = team[i];
      w.agent.location = w.leg->to;
      if (w.episode < m.episodes.size() && w.nav) {
        m.episodes[w.episode].distance += w.leg->length;
        ++m.episodes[w.episode].steps;
      }
      w.leg.reset();
      w.progress = 0.0;
      rec("move", clock, fuel, w.agent.id, w.agent.location);
      if (!kb.explored(w.agent.location)) {
        kb.explore(w.agent.location);
        rec("explore", clock, fuel, w.agent.id, w.agent.location);
      }
      if (w.nav && w.nav->done()) {
        w.nav.reset();
        w.agent.assignment.reset();
      }
    }
    expand_occupied();
  }

  std::vector<Agent> agents;
  for (const detail::Mover& w : team) agents.push_back(w.agent);
  detail::finish(m, kb, agents);
  m.elapsed_time = clock;
  m.trace = rec.take();
  return m;
}

inline RunMetrics run_fuel_efficient(const ProblemInstance& inst, std::size_t p, const HighLevelPolicy& high,
                                     const NavigationPolicy& nav, const RunOptions& opt = {}) {
  return run_sequential(inst, p, high, nav, opt);
}

inline RunMetrics run_time_efficient(const ProblemInstance& inst, std::size_t p, const HighLevelPolicy& high,
                                     const NavigationPolicy& nav, const RunOptions& opt = {}) {
  return run_time_engine(inst, p, p, high, nav, opt);
}

/// Simple mode moves all p agents; improved mode moves only the m agents
/// that minimize the allocation product each round.
inline RunMetrics run_combined(const ProblemInstance& inst, std::size_t p, std::size_t m, bool improved,
                               const HighLevelPolicy& high, const NavigationPolicy& nav, const RunOptions& opt = {}) {
  if (!improved && m != p) throw ArgumentError("simple combined mode moves all agents (m must equal p)");
  if (m < 1 || m > p) throw ArgumentError("movers must lie in [1, agents]");
  return run_time_engine(inst, p, m, high, nav, opt);
}

struct RunConfig {
  HighLevelPolicy high;
  NavigationPolicy nav;
  Mode mode = Mode::single;
  std::size_t agents = 1;
  std::size_t movers = 0;  // 0 means all agents
  CostWeights weights;
  RunOptions options;

  std::size_t resolved_movers() const { return movers == 0 ? agents : movers; }
};

inline RunMetrics run(const ProblemInstance& inst, const RunConfig& cfg) {
  switch (cfg.mode) {
    case Mode::single:
      if (cfg.agents != 1) throw ArgumentError("single mode uses exactly one agent");
      return run_single_agent(inst, cfg.high, cfg.nav, cfg.options);
    case Mode::fuel: return run_fuel_efficient(inst, cfg.agents, cfg.high, cfg.nav, cfg.options);
    case Mode::time: return run_time_efficient(inst, cfg.agents, cfg.high, cfg.nav, cfg.options);
    case Mode::combined_simple:
      return run_combined(inst, cfg.agents, cfg.resolved_movers(), false, cfg.high, cfg.nav, cfg.options);
    case Mode::combined_improved:
      return run_combined(inst, cfg.agents, cfg.resolved_movers(), true, cfg.high, cfg.nav, cfg.options);
  }
  throw ArgumentError("unknown mode");
}

}  // namespace pha
