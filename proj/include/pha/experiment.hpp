#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "pha/error.hpp"
#include "pha/generate.hpp"
#include "pha/io.hpp"
#include "pha/multi_agent.hpp"
#include "pha/oracles.hpp"
#include "pha/rng.hpp"

namespace pha {

/// A grid of runs. Every (size, variant, instance) triple gets one graph and
/// one start/goal pair; every cell of the policy grid runs on it.
///
/// Seeds, all via derive_seed:
///   instance = derive(master, {size, hash(variant), index})
///   graph    = derive(instance, {hash("graph")})
///   pair     = derive(instance, {hash("pair")})
///   run      = derive(instance, {hash(cell key)})
/// Cost weights do not change a run, so each weight pair is a row computed
/// from the same run.
struct SweepSpec {
  std::string name = "sweep";
  std::vector<std::size_t> sizes{100, 500, 1000, 2000};
  std::vector<Variant> variants{Variant::regular};
  double delete_fraction = 0.6;
  std::size_t extra_edges = 400;
  std::size_t instances = 50;
  std::uint64_t master_seed = 1;

  std::vector<HighKind> high{HighKind::wina};
  std::vector<std::size_t> windows{0};
  WindowScope scope = WindowScope::open_list;
  std::vector<NavKind> navs{NavKind::iadfs};
  double c1 = 0.25;
  double c2 = 2.5;
  std::vector<Mode> modes{Mode::single};
  std::vector<std::size_t> agents{1};
  std::vector<std::size_t> movers{0};
  std::vector<CostWeights> weights{CostWeights{}};

  bool evaluate = false;
  std::size_t tsp_cap = kDefaultTspCap;
  bool audit_routes = false;
};

namespace detail {

template <class T, class F>
std::vector<T> list_or_scalar(const json& j, const char* key, std::vector<T> fallback, F convert) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  std::vector<T> out;
  if (v.is_array()) {
    for (const json& e : v) out.push_back(convert(e));
  } else {
    out.push_back(convert(v));
  }
  if (out.empty()) throw ArgumentError(std::string("sweep field '") + key + "' is empty");
  return out;
}

}  // namespace detail

inline SweepSpec sweep_from_json(const json& j) {
  static const std::set<std::string> top{"name", "sizes", "variant", "variants", "delete_fraction", "extra_edges",
                                         "instances", "master_seed", "grid", "evaluate", "tsp_cap", "audit_routes"};
  static const std::set<std::string> grid_keys{"high",  "window", "window_scope", "nav",     "c1",
                                               "c2",    "mode",   "agents",       "movers", "weights"};
  if (!j.is_object()) throw ParseError("sweep config must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    if (!top.count(k)) throw ParseError("unknown sweep field '" + k + "'");
  }
  const auto as_size = [](const json& e) { return e.get<std::size_t>(); };
  const auto as_str = [](const json& e) { return e.get<std::string>(); };
  SweepSpec s;
  try {
    s.name = j.value("name", s.name);
    s.sizes = detail::list_or_scalar<std::size_t>(j, "sizes", s.sizes, as_size);
    const char* vkey = j.contains("variants") ? "variants" : "variant";
    if (j.contains(vkey)) {
      s.variants.clear();
      for (const std::string& v : detail::list_or_scalar<std::string>(j, vkey, {}, as_str)) {
        s.variants.push_back(parse_variant(v));
      }
    }
    s.delete_fraction = j.value("delete_fraction", s.delete_fraction);
    s.extra_edges = j.value("extra_edges", s.extra_edges);
    s.instances = j.value("instances", s.instances);
    s.master_seed = j.value("master_seed", s.master_seed);
    s.evaluate = j.value("evaluate", s.evaluate);
    s.tsp_cap = j.value("tsp_cap", s.tsp_cap);
    s.audit_routes = j.value("audit_routes", s.audit_routes);
    const json grid = j.value("grid", json::object());
    for (const auto& [k, v] : grid.items()) {
      if (!grid_keys.count(k)) throw ParseError("unknown sweep grid field '" + k + "'");
    }
    s.high.clear();
    for (const std::string& h : detail::list_or_scalar<std::string>(grid, "high", {"wina"}, as_str)) {
      s.high.push_back(parse_high(h));
    }
    s.windows = detail::list_or_scalar<std::size_t>(grid, "window", s.windows, as_size);
    s.scope = parse_window_scope(grid.value("window_scope", std::string("open-list")));
    s.navs.clear();
    for (const std::string& n : detail::list_or_scalar<std::string>(grid, "nav", {"iadfs"}, as_str)) {
      s.navs.push_back(parse_nav(n));
    }
    s.c1 = grid.value("c1", s.c1);
    s.c2 = grid.value("c2", s.c2);
    s.modes.clear();
    for (const std::string& m : detail::list_or_scalar<std::string>(grid, "mode", {"single"}, as_str)) {
      s.modes.push_back(parse_mode(m));
    }
    s.agents = detail::list_or_scalar<std::size_t>(grid, "agents", s.agents, as_size);
    s.movers = detail::list_or_scalar<std::size_t>(grid, "movers", s.movers, as_size);
    if (grid.contains("weights")) {
      s.weights.clear();
      for (const json& w : grid.at("weights")) {
        if (!w.is_array() || w.size() != 2) throw ParseError("weights entries must be [w_t, w_f] pairs");
        CostWeights cw{w[0].get<double>(), w[1].get<double>()};
        cw.validate();
        s.weights.push_back(cw);
      }
      if (s.weights.empty()) throw ArgumentError("sweep field 'weights' is empty");
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("sweep config: ") + e.what());
  }
  if (s.instances == 0) throw ArgumentError("instances must be positive");
  for (std::size_t n : s.sizes) {
    if (n < 3) throw ArgumentError("graph sizes must be at least 3");
  }
  NavigationPolicy{NavKind::iadfs, s.c1, s.c2}.validate();
  return s;
}

inline json sweep_to_json(const SweepSpec& s) {
  json variants = json::array();
  for (Variant v : s.variants) variants.push_back(to_string(v));
  json high = json::array();
  for (HighKind h : s.high) high.push_back(to_string(h));
  json navs = json::array();
  for (NavKind n : s.navs) navs.push_back(to_string(n));
  json modes = json::array();
  for (Mode m : s.modes) modes.push_back(to_string(m));
  json weights = json::array();
  for (const CostWeights& w : s.weights) weights.push_back({w.time, w.fuel});
  return json{{"name", s.name},
              {"sizes", s.sizes},
              {"variants", variants},
              {"delete_fraction", s.delete_fraction},
              {"extra_edges", s.extra_edges},
              {"instances", s.instances},
              {"master_seed", s.master_seed},
              {"evaluate", s.evaluate},
              {"tsp_cap", s.tsp_cap},
              {"audit_routes", s.audit_routes},
              {"grid",
               {{"high", high},
                {"window", s.windows},
                {"window_scope", to_string(s.scope)},
                {"nav", navs},
                {"c1", s.c1},
                {"c2", s.c2},
                {"mode", modes},
                {"agents", s.agents},
                {"movers", s.movers},
                {"weights", weights}}}};
}

/// Applies PHA_SEED, when set, as the master seed.
inline void apply_seed_override(SweepSpec& spec) {
  if (const char* env = std::getenv("PHA_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      spec.master_seed = std::stoull(env, &used, 0);
      if (env[used] != '\0') throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ArgumentError(std::string("PHA_SEED is not an unsigned integer: '") + env + "'");
    }
  }
}

/// One policy-grid point.
struct Cell {
  HighKind high = HighKind::wina;
  std::size_t window = 0;
  NavKind nav = NavKind::iadfs;
  Mode mode = Mode::single;
  std::size_t agents = 1;
  std::size_t movers = 1;

  std::string key() const {
    return "high=" + to_string(high) + ";window=" + std::to_string(window) + ";nav=" + to_string(nav) +
           ";mode=" + to_string(mode) + ";agents=" + std::to_string(agents) + ";movers=" + std::to_string(movers);
  }

  auto tie() const { return std::tuple(high, window, nav, mode, agents, movers); }
  bool operator<(const Cell& o) const { return tie() < o.tie(); }
  bool operator==(const Cell& o) const { return tie() == o.tie(); }
};

/// The valid, de-duplicated cells of the grid. A* ignores the window; only
/// the improved combined mode has a mover count other than p; single mode
/// needs p = 1. Combinations outside those rules are dropped.
inline std::vector<Cell> expand_cells(const SweepSpec& s) {
  std::vector<Cell> cells;
  std::set<Cell> seen;
  for (HighKind h : s.high) {
    for (std::size_t w : s.windows) {
      for (NavKind n : s.navs) {
        for (Mode mode : s.modes) {
          for (std::size_t p : s.agents) {
            for (std::size_t m : s.movers) {
              if (p == 0) continue;
              if (mode == Mode::single && p != 1) continue;
              std::size_t movers = p;
              if (mode == Mode::combined_improved && m != 0) movers = m;
              if (movers > p) continue;
              Cell c{h, h == HighKind::astar ? 1 : w, n, mode, p, movers};
              if (seen.insert(c).second) cells.push_back(c);
            }
          }
        }
      }
    }
  }
  return cells;
}

inline std::uint64_t instance_seed(std::uint64_t master, std::size_t size, Variant v, std::size_t index) {
  return derive_seed(master, {size, hash_name(to_string(v)), index});
}

inline std::uint64_t run_seed(std::uint64_t inst_seed, const Cell& c) {
  return derive_seed(inst_seed, {hash_name(c.key())});
}

struct ResultRow {
  std::size_t size = 0;
  Variant variant = Variant::regular;
  std::size_t instance = 0;
  Cell cell;
  std::size_t window = 0;  // resolved for this size
  CostWeights weights;
  std::uint64_t seed = 0;  // run seed
  NodeId start = kNoNode;
  NodeId goal = kNoNode;
  double oracle_length = 0.0;
  double path_length = 0.0;
  double fuel = 0.0;
  double time = 0.0;
  double c_total = 0.0;
  std::size_t closed = 0;
  std::size_t expanded = 0;
  std::size_t explored = 0;
  std::size_t route_violations = 0;
  std::optional<double> mst;
  std::optional<double> tsp;
  std::vector<double> agent_fuels;
  std::string error;
};

inline const std::vector<std::string>& result_columns() {
  static const std::vector<std::string> cols{
      "size",   "variant", "instance", "high",     "window",        "nav",         "mode",
      "agents", "movers",  "wt",       "wf",       "seed",          "start",       "goal",
      "oracle_length",     "path_length",         "fuel",           "time",        "c_total",
      "closed", "expanded", "explored", "route_violations", "mst", "tsp",       "agent_fuels", "error"};
  return cols;
}

namespace detail {

inline std::string clean_error(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

inline std::string opt_text(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace detail

inline std::string results_to_csv(const std::vector<ResultRow>& rows) {
  std::string out;
  const auto& cols = result_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
  out += '\n';
  for (const ResultRow& r : rows) {
    std::string fuels;
    for (std::size_t i = 0; i < r.agent_fuels.size(); ++i) fuels += (i ? ";" : "") + format_double(r.agent_fuels[i]);
    const std::vector<std::string> f{std::to_string(r.size),
                                     to_string(r.variant),
                                     std::to_string(r.instance),
                                     to_string(r.cell.high),
                                     std::to_string(r.window),
                                     to_string(r.cell.nav),
                                     to_string(r.cell.mode),
                                     std::to_string(r.cell.agents),
                                     std::to_string(r.cell.movers),
                                     format_double(r.weights.time),
                                     format_double(r.weights.fuel),
                                     std::to_string(r.seed),
                                     std::to_string(r.start),
                                     std::to_string(r.goal),
                                     format_double(r.oracle_length),
                                     format_double(r.path_length),
                                     format_double(r.fuel),
                                     format_double(r.time),
                                     format_double(r.c_total),
                                     std::to_string(r.closed),
                                     std::to_string(r.expanded),
                                     std::to_string(r.explored),
                                     std::to_string(r.route_violations),
                                     detail::opt_text(r.mst),
                                     detail::opt_text(r.tsp),
                                     fuels,
                                     detail::clean_error(r.error)};
    for (std::size_t i = 0; i < f.size(); ++i) out += (i ? "," : "") + f[i];
    out += '\n';
  }
  return out;
}

/// Parses results.csv. The header must list exactly the result columns.
inline std::vector<ResultRow> results_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<ResultRow> rows;
  if (!std::getline(in, line)) return rows;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto& cols = result_columns();
  if (detail::split(line, ',') != cols) throw ParseError(1, "results table: unexpected header '" + line + "'");
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = detail::split(line, ',');
    if (f.size() != cols.size()) {
      throw ParseError(lineno, "results table: expected " + std::to_string(cols.size()) +
                       " fields, got " + std::to_string(f.size()));
    }
    try {
      ResultRow r;
      std::size_t i = 0;
      const auto num = [&] { return std::stod(f[i++]); };
      const auto count = [&] { return static_cast<std::size_t>(std::stoull(f[i++])); };
      const auto opt = [&]() -> std::optional<double> {
        const std::string& s = f[i++];
        if (s.empty()) return std::nullopt;
        return std::stod(s);
      };
      r.size = count();
      r.variant = parse_variant(f[i++]);
      r.instance = count();
      r.cell.high = parse_high(f[i++]);
      r.window = count();
      r.cell.nav = parse_nav(f[i++]);
      r.cell.mode = parse_mode(f[i++]);
      r.cell.agents = count();
      r.cell.movers = count();
      r.weights.time = num();
      r.weights.fuel = num();
      r.seed = std::stoull(f[i++]);
      r.start = static_cast<NodeId>(std::stol(f[i++]));
      r.goal = static_cast<NodeId>(std::stol(f[i++]));
      r.oracle_length = num();
      r.path_length = num();
      r.fuel = num();
      r.time = num();
      r.c_total = num();
      r.closed = count();
      r.expanded = count();
      r.explored = count();
      r.route_violations = count();
      r.mst = opt();
      r.tsp = opt();
      const std::string fuels = f[i++];
      if (!fuels.empty()) {
        for (const std::string& x : detail::split(fuels, ';')) r.agent_fuels.push_back(std::stod(x));
      }
      r.error = f[i++];
      r.cell.window = r.window;
      rows.push_back(std::move(r));
    } catch (const std::invalid_argument& e) {
      throw ParseError(lineno, std::string("results table: ") + e.what());
    } catch (const std::out_of_range& e) {
      throw ParseError(lineno, std::string("results table: ") + e.what());
    }
  }
  return rows;
}

/// Graph and start/goal pair of one sweep instance.
inline ProblemInstance make_sweep_instance(const SweepSpec& spec, std::size_t size, Variant v, std::size_t index) {
  const std::uint64_t seed = instance_seed(spec.master_seed, size, v, index);
  GraphSpec gs{size, v, spec.delete_fraction, spec.extra_edges, derive_seed(seed, {hash_name("graph")})};
  return sample_instance(generate(gs), derive_seed(seed, {hash_name("pair")}));
}

inline RunConfig cell_config(const SweepSpec& spec, const Cell& c, std::uint64_t seed) {
  RunConfig cfg;
  cfg.high = HighLevelPolicy{c.high, c.window, spec.scope};
  cfg.nav = NavigationPolicy{c.nav, spec.c1, spec.c2};
  cfg.mode = c.mode;
  cfg.agents = c.agents;
  cfg.movers = c.movers;
  cfg.options.seed = seed;
  cfg.options.audit_routes = spec.audit_routes;
  return cfg;
}

/// Runs one cell on one instance; one row per weight pair. Failures land in
/// the error column.
inline std::vector<ResultRow> run_cell(const SweepSpec& spec, const ProblemInstance& inst, double oracle,
                                       std::size_t size, Variant v, std::size_t index, const Cell& c) {
  ResultRow base;
  base.size = size;
  base.variant = v;
  base.instance = index;
  base.cell = c;
  base.window = HighLevelPolicy{c.high, c.window, spec.scope}.window_for(size);
  base.seed = run_seed(instance_seed(spec.master_seed, size, v, index), c);
  base.start = inst.start;
  base.goal = inst.goal;
  base.oracle_length = oracle;
  try {
    const RunMetrics m = run(inst, cell_config(spec, c, base.seed));
    base.path_length = m.success ? m.path.length : 0.0;
    base.fuel = m.total_fuel;
    base.time = m.elapsed_time;
    base.closed = m.closed;
    base.expanded = m.expanded;
    base.explored = m.explored;
    base.route_violations = m.audit.violations;
    base.agent_fuels = m.agent_fuel;
    if (!m.success) {
      base.error = "goal not reached";
    } else if (spec.evaluate) {
      const ClosedSetMetric e = evaluate_run(m, inst, spec.tsp_cap);
      base.mst = e.mst;
      base.tsp = e.tsp;
    }
  } catch (const std::exception& e) {
    base.error = e.what();
  }
  std::vector<ResultRow> rows;
  for (const CostWeights& w : spec.weights) {
    ResultRow r = base;
    r.weights = w;
    r.c_total = w.time * r.time + w.fuel * r.fuel;
    rows.push_back(std::move(r));
  }
  return rows;
}

/// Runs the whole grid on `workers` threads. Rows come out ordered by
/// (size, variant, instance, cell, weights) whatever the scheduling.
inline std::vector<ResultRow> run_sweep(const SweepSpec& spec, std::size_t workers = 1) {
  struct Unit {
    std::size_t size;
    Variant variant;
    std::size_t index;
  };
  std::vector<Unit> units;
  for (std::size_t n : spec.sizes) {
    for (Variant v : spec.variants) {
      for (std::size_t i = 0; i < spec.instances; ++i) units.push_back({n, v, i});
    }
  }
  const std::vector<Cell> cells = expand_cells(spec);
  std::vector<std::vector<ResultRow>> slots(units.size());
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t u = next++; u < units.size(); u = next++) {
      const Unit& unit = units[u];
      std::vector<ResultRow>& out = slots[u];
      try {
        const ProblemInstance inst = make_sweep_instance(spec, unit.size, unit.variant, unit.index);
        const double oracle = dijkstra(inst.graph, inst.start).distance[inst.goal];
        for (const Cell& c : cells) {
          std::vector<ResultRow> rows = run_cell(spec, inst, oracle, unit.size, unit.variant, unit.index, c);
          out.insert(out.end(), rows.begin(), rows.end());
        }
      } catch (const std::exception& e) {
        for (const Cell& c : cells) {
          for (const CostWeights& w : spec.weights) {
            ResultRow r;
            r.size = unit.size;
            r.variant = unit.variant;
            r.instance = unit.index;
            r.cell = c;
            r.weights = w;
            r.error = std::string("instance: ") + e.what();
            out.push_back(std::move(r));
          }
        }
      }
    }
  };
  workers = std::max<std::size_t>(1, std::min(workers, units.size()));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  std::vector<ResultRow> rows;
  for (auto& s : slots) rows.insert(rows.end(), s.begin(), s.end());
  return rows;
}

/// Recomputes one row from the sweep spec and the row's coordinates.
inline ResultRow replay_row(const SweepSpec& spec, const ResultRow& row) {
  const ProblemInstance inst = make_sweep_instance(spec, row.size, row.variant, row.instance);
  const double oracle = dijkstra(inst.graph, inst.start).distance[inst.goal];
  SweepSpec one = spec;
  one.weights = {row.weights};
  return run_cell(one, inst, oracle, row.size, row.variant, row.instance, row.cell).front();
}

// ---------------------------------------------------------------------------
// Reporting

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  double stddev = 0.0;
};

/// Mean and sample standard deviation. Values are summed in sorted order so
/// the result does not depend on input order.
inline Summary summarize(std::vector<double> v) {
  Summary s;
  s.n = v.size();
  if (v.empty()) return s;
  std::sort(v.begin(), v.end());
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  if (v.size() > 1) {
    std::vector<double> sq;
    for (double x : v) sq.push_back((x - s.mean) * (x - s.mean));
    std::sort(sq.begin(), sq.end());
    double ss = 0.0;
    for (double x : sq) ss += x;
    s.stddev = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return s;
}

struct GroupKey {
  std::size_t size;
  std::string variant;
  std::string high;
  std::size_t window;
  std::string nav;
  std::string mode;
  std::size_t agents;
  std::size_t movers;
  double wt;
  double wf;

  auto tie() const { return std::tie(size, variant, high, window, nav, mode, agents, movers, wt, wf); }
  bool operator<(const GroupKey& o) const { return tie() < o.tie(); }
};

inline GroupKey group_key(const ResultRow& r) {
  return {r.size,         to_string(r.variant), to_string(r.cell.high), r.window,        to_string(r.cell.nav),
          to_string(r.cell.mode), r.cell.agents, r.cell.movers,        r.weights.time, r.weights.fuel};
}

struct Aggregate {
  GroupKey key;
  std::size_t runs = 0;
  std::size_t errors = 0;
  Summary fuel, time, c_total, path, oracle, closed, mst, tsp;
  std::optional<double> ratio_tsp;
  std::optional<double> ratio_mst;
};

inline std::vector<Aggregate> aggregate(const std::vector<ResultRow>& rows) {
  std::map<GroupKey, std::vector<const ResultRow*>> groups;
  for (const ResultRow& r : rows) groups[group_key(r)].push_back(&r);
  std::vector<Aggregate> out;
  for (const auto& [key, members] : groups) {
    Aggregate a;
    a.key = key;
    a.runs = members.size();
    std::vector<double> fuel, time, c_total, path, oracle, closed, mst, tsp, fuel_tsp;
    for (const ResultRow* r : members) {
      if (!r->error.empty()) {
        ++a.errors;
        continue;
      }
      fuel.push_back(r->fuel);
      time.push_back(r->time);
      c_total.push_back(r->c_total);
      path.push_back(r->path_length);
      oracle.push_back(r->oracle_length);
      closed.push_back(static_cast<double>(r->closed));
      if (r->mst) mst.push_back(*r->mst);
      if (r->tsp) {
        tsp.push_back(*r->tsp);
        fuel_tsp.push_back(r->fuel);
      }
    }
    a.fuel = summarize(fuel);
    a.time = summarize(time);
    a.c_total = summarize(c_total);
    a.path = summarize(path);
    a.oracle = summarize(oracle);
    a.closed = summarize(closed);
    a.mst = summarize(mst);
    a.tsp = summarize(tsp);
    if (a.mst.n > 0 && a.mst.mean > 0.0) a.ratio_mst = a.fuel.mean / a.mst.mean;
    if (a.tsp.n > 0 && a.tsp.mean > 0.0) a.ratio_tsp = summarize(fuel_tsp).mean / a.tsp.mean;
    out.push_back(std::move(a));
  }
  return out;
}

/// Output files of report(), keyed by file name.
using ReportFiles = std::map<std::string, std::string>;

namespace detail {

inline std::string opt_cell(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

inline std::string aggregate_csv(const std::vector<Aggregate>& aggs) {
  std::string out =
      "size,variant,high,window,nav,mode,agents,movers,wt,wf,runs,errors,fuel_mean,fuel_std,time_mean,time_std,"
      "c_total_mean,c_total_std,path_mean,oracle_mean,closed_mean,mst_mean,tsp_mean,tsp_runs,ratio_mst,ratio_tsp\n";
  for (const Aggregate& a : aggs) {
    const GroupKey& k = a.key;
    out += std::to_string(k.size) + "," + k.variant + "," + k.high + "," + std::to_string(k.window) + "," + k.nav +
           "," + k.mode + "," + std::to_string(k.agents) + "," + std::to_string(k.movers) + "," +
           format_double(k.wt) + "," + format_double(k.wf) + "," + std::to_string(a.runs) + "," +
           std::to_string(a.errors) + "," + format_double(a.fuel.mean) + "," + format_double(a.fuel.stddev) + "," +
           format_double(a.time.mean) + "," + format_double(a.time.stddev) + "," + format_double(a.c_total.mean) +
           "," + format_double(a.c_total.stddev) + "," + format_double(a.path.mean) + "," +
           format_double(a.oracle.mean) + "," + format_double(a.closed.mean) + "," +
           (a.mst.n ? format_double(a.mst.mean) : "") + "," + (a.tsp.n ? format_double(a.tsp.mean) : "") + "," +
           std::to_string(a.tsp.n) + "," + opt_cell(a.ratio_mst) + "," + opt_cell(a.ratio_tsp) + "\n";
  }
  return out;
}

/// Axis value of a key, by axis name.
inline double axis_value(const GroupKey& k, const std::string& axis) {
  if (axis == "size") return static_cast<double>(k.size);
  if (axis == "window") return static_cast<double>(k.window);
  if (axis == "agents") return static_cast<double>(k.agents);
  if (axis == "movers") return static_cast<double>(k.movers);
  return k.wf;
}

/// Key with one axis blanked, naming the series the point belongs to.
inline std::string series_label(const GroupKey& k, const std::string& axis) {
  std::string s;
  const auto add = [&](const std::string& name, const std::string& value) {
    if (name == axis) return;
    s += (s.empty() ? "" : " ") + name + "=" + value;
  };
  add("size", std::to_string(k.size));
  add("variant", k.variant);
  add("high", k.high);
  add("window", std::to_string(k.window));
  add("nav", k.nav);
  add("mode", k.mode);
  add("agents", std::to_string(k.agents));
  add("movers", std::to_string(k.movers));
  add("wf", format_double(k.wf));
  return s;
}

/// Whitespace series, one gnuplot data block per series (blocks separated by
/// two blank lines, selectable with `index`).
inline std::string series_dat(const std::vector<Aggregate>& aggs, const std::string& axis) {
  std::map<std::string, std::vector<const Aggregate*>> series;
  for (const Aggregate& a : aggs) series[series_label(a.key, axis)].push_back(&a);
  std::string out;
  bool first = true;
  for (auto& [label, points] : series) {
    std::sort(points.begin(), points.end(), [&](const Aggregate* x, const Aggregate* y) {
      return axis_value(x->key, axis) < axis_value(y->key, axis);
    });
    if (!first) out += "\n\n";
    first = false;
    out += "# " + label + "\n# " + axis + " fuel_mean fuel_std time_mean time_std c_total_mean c_total_std runs\n";
    for (const Aggregate* a : points) {
      out += format_double(axis_value(a->key, axis)) + " " + format_double(a->fuel.mean) + " " +
             format_double(a->fuel.stddev) + " " + format_double(a->time.mean) + " " +
             format_double(a->time.stddev) + " " + format_double(a->c_total.mean) + " " +
             format_double(a->c_total.stddev) + " " + std::to_string(a->runs - a->errors) + "\n";
    }
  }
  return out;
}

inline std::string file_token(std::string s) {
  for (char& c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '.') c = '_';
  }
  return s;
}

}  // namespace detail

/// Mean C_total with agents or movers down the rows and w_f across the
/// columns, plus a final row naming the argmin row of each column. One matrix
/// per combination of the other coordinates.
inline ReportFiles ctotal_matrices(const std::vector<Aggregate>& aggs) {
  struct Frame {
    std::size_t size;
    std::string variant, high, nav, mode;
    std::size_t window;
    auto tie() const { return std::tie(size, variant, high, nav, mode, window); }
    bool operator<(const Frame& o) const { return tie() < o.tie(); }
  };
  std::map<Frame, std::vector<const Aggregate*>> frames;
  for (const Aggregate& a : aggs) {
    frames[{a.key.size, a.key.variant, a.key.high, a.key.nav, a.key.mode, a.key.window}].push_back(&a);
  }
  ReportFiles files;
  for (const auto& [frame, members] : frames) {
    std::set<double> wfs;
    std::set<std::size_t> movers, agents;
    for (const Aggregate* a : members) {
      wfs.insert(a->key.wf);
      movers.insert(a->key.movers);
      agents.insert(a->key.agents);
    }
    if (wfs.size() < 2) continue;
    const bool by_movers = frame.mode == "combined-improved" && movers.size() > 1;
    if (!by_movers && agents.size() < 2) continue;
    const std::set<std::size_t>& rows = by_movers ? movers : agents;
    if (by_movers && agents.size() > 1) continue;  // ambiguous: both axes vary
    std::map<std::pair<std::size_t, double>, double> cell;
    for (const Aggregate* a : members) {
      cell[{by_movers ? a->key.movers : a->key.agents, a->key.wf}] = a->c_total.mean;
    }
    std::string out = by_movers ? "movers" : "agents";
    for (double wf : wfs) out += ",wf=" + format_double(wf);
    out += "\n";
    for (std::size_t r : rows) {
      out += std::to_string(r);
      for (double wf : wfs) {
        auto it = cell.find({r, wf});
        out += "," + (it == cell.end() ? std::string() : format_double(it->second));
      }
      out += "\n";
    }
    out += "argmin";
    for (double wf : wfs) {
      std::optional<std::size_t> best;
      double best_v = kInfinity;
      for (std::size_t r : rows) {
        auto it = cell.find({r, wf});
        if (it != cell.end() && it->second < best_v) {
          best_v = it->second;
          best = r;
        }
      }
      out += "," + (best ? std::to_string(*best) : std::string());
    }
    out += "\n";
    files["ctotal_" + detail::file_token(frame.mode + "_" + std::to_string(frame.size) + "_" + frame.variant + "_" +
                                         frame.high + "_" + frame.nav) +
          ".csv"] = out;
  }
  return files;
}

/// Per-agent fuel shares of multi-agent runs: each run's agent fuels sorted
/// descending as percentages of its total, averaged rank by rank.
inline std::string fuel_shares_csv(const std::vector<ResultRow>& rows) {
  // One run appears once per weight pair; the instance index dedupes it.
  std::map<std::tuple<std::size_t, std::string, std::string, std::string, std::size_t, std::size_t>,
           std::map<std::size_t, std::vector<double>>>
      groups;
  for (const ResultRow& r : rows) {
    if (!r.error.empty() || r.cell.agents < 2 || r.fuel <= 0.0) continue;
    std::vector<double> shares;
    for (double f : r.agent_fuels) shares.push_back(100.0 * f / r.fuel);
    std::sort(shares.rbegin(), shares.rend());
    groups[{r.size, to_string(r.variant), to_string(r.cell.nav), to_string(r.cell.mode), r.cell.agents,
            r.cell.movers}]
        .emplace(r.instance, std::move(shares));
  }
  std::string out = "size,variant,nav,mode,agents,movers,rank,share_mean,share_std\n";
  for (const auto& [k, runs] : groups) {
    const auto& [size, variant, nav, mode, agents, movers] = k;
    for (std::size_t rank = 0; rank < agents; ++rank) {
      std::vector<double> v;
      for (const auto& [index, shares] : runs) v.push_back(shares[rank]);
      const Summary s = summarize(v);
      out += std::to_string(size) + "," + variant + "," + nav + "," + mode + "," + std::to_string(agents) + "," +
             std::to_string(movers) + "," + std::to_string(rank + 1) + "," + format_double(s.mean) + "," +
             format_double(s.stddev) + "\n";
    }
  }
  return out;
}

/// Aggregate CSV, plot series for every axis with more than one value, C_total
/// matrices and fuel shares. An empty table gives header-only files.
inline ReportFiles report(const std::vector<ResultRow>& rows) {
  ReportFiles files;
  const std::vector<Aggregate> aggs = aggregate(rows);
  files["aggregate.csv"] = detail::aggregate_csv(aggs);
  for (const std::string axis : {"size", "window", "agents", "movers", "wf"}) {
    std::set<double> values;
    for (const Aggregate& a : aggs) values.insert(detail::axis_value(a.key, axis));
    if (values.size() > 1) files["series_" + axis + ".dat"] = detail::series_dat(aggs, axis);
  }
  for (auto& [name, text] : ctotal_matrices(aggs)) files[name] = std::move(text);
  files["fuel_shares.csv"] = fuel_shares_csv(rows);
  return files;
}

inline void write_report(const std::filesystem::path& dir, const ReportFiles& files) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, text] : files) atomic_write(dir / name, text);
}

/// Runs the sweep and writes spec.json, results.csv and the report into `dir`.
inline std::vector<ResultRow> run_sweep_to(const SweepSpec& spec, const std::filesystem::path& dir,
                                           std::size_t workers) {
  std::vector<ResultRow> rows = run_sweep(spec, workers);
  std::filesystem::create_directories(dir);
  atomic_write(dir / "spec.json", sweep_to_json(spec).dump(2) + "\n");
  atomic_write(dir / "results.csv", results_to_csv(rows));
  write_report(dir, report(rows));
  return rows;
}

}  // namespace pha
