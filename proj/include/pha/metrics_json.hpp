#pragma once

#include <string>

#include "pha/io.hpp"
#include "pha/multi_agent.hpp"

namespace pha {

inline json config_to_json(const RunConfig& cfg) {
  return json{{"high", to_string(cfg.high.kind)},
              {"window", cfg.high.window},
              {"window_scope", to_string(cfg.high.scope)},
              {"nav", to_string(cfg.nav.kind)},
              {"c1", cfg.nav.c1},
              {"c2", cfg.nav.c2},
              {"mode", to_string(cfg.mode)},
              {"agents", cfg.agents},
              {"movers", cfg.resolved_movers()},
              {"wt", cfg.weights.time},
              {"wf", cfg.weights.fuel},
              {"seed", cfg.options.seed}};
}

inline RunConfig config_from_json(const json& j) {
  RunConfig cfg;
  cfg.high.kind = parse_high(j.value("high", std::string("wina")));
  cfg.high.window = j.value("window", std::size_t{0});
  cfg.high.scope = parse_window_scope(j.value("window_scope", std::string("open-list")));
  cfg.nav.kind = parse_nav(j.value("nav", std::string("iadfs")));
  cfg.nav.c1 = j.value("c1", 0.25);
  cfg.nav.c2 = j.value("c2", 2.5);
  cfg.mode = parse_mode(j.value("mode", std::string("single")));
  cfg.agents = j.value("agents", std::size_t{1});
  cfg.movers = j.value("movers", std::size_t{0});
  cfg.weights.time = j.value("wt", 1.0);
  cfg.weights.fuel = j.value("wf", 0.0);
  cfg.options.seed = j.value("seed", std::uint64_t{0});
  return cfg;
}

/// Metrics document written by `run` and `run-ma`; `eval` reads it back.
inline json metrics_to_json(const RunMetrics& m, const RunConfig& cfg, std::size_t node_count) {
  json episodes = json::array();
  for (const EpisodeRecord& e : m.episodes) {
    episodes.push_back({{"agent", e.agent}, {"from", e.from}, {"target", e.target}, {"distance", e.distance},
                        {"steps", e.steps}});
  }
  json resolved = config_to_json(cfg);
  resolved["window"] = cfg.high.window_for(node_count);
  return json{{"config", resolved},
              {"success", m.success},
              {"path", m.path.nodes},
              {"path_length", m.path.length},
              {"agent_fuel", m.agent_fuel},
              {"total_fuel", m.total_fuel},
              {"elapsed_time", m.elapsed_time},
              {"c_total", m.c_total(cfg.weights.time, cfg.weights.fuel)},
              {"explored", m.explored},
              {"expanded", m.expanded},
              {"closed", m.closed},
              {"closed_nodes", m.closed_nodes},
              {"route_audit", {{"episodes", m.audit.episodes}, {"violations", m.audit.violations}}},
              {"episodes", episodes}};
}

/// One JSON object per line.
inline std::string trace_to_ndjson(const std::vector<TraceEvent>& trace) {
  std::string out;
  for (const TraceEvent& e : trace) {
    json j{{"event", e.kind}, {"clock", e.clock}, {"fuel", e.fuel}, {"node", e.node}};
    if (e.agent >= 0) j["agent"] = e.agent;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace pha
