// pha: generate instances, run PHA* / MAPHA*, sweep grids, evaluate and report.
//
// Exit codes: 0 success, 1 usage error, 2 runtime failure.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pha/pha.hpp"

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> kNavNames{"tree", "known", "aerial", "pdfs", "ddfs", "adfs", "iadfs"};
const std::vector<std::string> kModeNames{"fuel", "time", "combined-simple", "combined-improved"};

/// --seed if given, else PHA_SEED, else `fallback`.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, std::uint64_t fallback) {
  if (flag) return *flag;
  if (const char* env = std::getenv("PHA_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 0);
    if (*end != '\0') throw UsageError(std::string("PHA_SEED is not an unsigned integer: '") + env + "'");
    return v;
  }
  return fallback;
}

struct GenerateArgs {
  std::size_t nodes = 0;
  std::string variant = "regular";
  double delete_fraction = 0.6;
  std::size_t extra_edges = 400;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> pair_seed;
  bool graph_only = false;
  std::string out;
};

int cmd_generate(const GenerateArgs& a) {
  pha::GraphSpec spec{a.nodes, pha::parse_variant(a.variant), a.delete_fraction, a.extra_edges,
                      resolve_seed(a.seed, 0)};
  pha::PhysicalGraph graph = pha::generate(spec);
  const pha::json meta{{"spec", pha::spec_to_json(spec)}, {"seed", spec.seed}};
  if (a.graph_only) {
    pha::write_graph(a.out, graph, meta);
    return 0;
  }
  const std::uint64_t pair_seed = a.pair_seed ? *a.pair_seed : pha::derive_seed(spec.seed, {pha::hash_name("pair")});
  pha::ProblemInstance inst = pha::sample_instance(std::move(graph), pair_seed);
  pha::json m = meta;
  m["pair_seed"] = pair_seed;
  pha::write_instance(a.out, inst, m);
  return 0;
}

struct RunArgs {
  std::string instance;
  std::string high = "wina";
  std::size_t window = 0;
  std::string scope = "open-list";
  std::string nav = "iadfs";
  double c1 = 0.25;
  double c2 = 2.5;
  std::string mode = "single";
  std::size_t agents = 1;
  std::size_t movers = 0;
  double wt = 1.0;
  double wf = 0.0;
  std::optional<std::uint64_t> seed;
  bool audit = false;
  std::string trace;
  std::string out;
};

int cmd_run(const RunArgs& a) {
  pha::RunConfig cfg;
  cfg.high = pha::HighLevelPolicy{pha::parse_high(a.high), a.window, pha::parse_window_scope(a.scope)};
  cfg.nav = pha::NavigationPolicy{pha::parse_nav(a.nav), a.c1, a.c2};
  cfg.mode = pha::parse_mode(a.mode);
  cfg.agents = a.agents;
  cfg.movers = a.movers;
  cfg.weights = pha::CostWeights{a.wt, a.wf};
  cfg.options.seed = resolve_seed(a.seed, 0);
  cfg.options.record_trace = !a.trace.empty();
  cfg.options.audit_routes = a.audit;
  try {
    cfg.nav.validate();
    cfg.weights.validate();
  } catch (const pha::ArgumentError& e) {
    throw UsageError(e.what());
  }
  if (cfg.mode == pha::Mode::single && cfg.agents != 1) throw UsageError("single mode uses exactly one agent");
  if (cfg.mode != pha::Mode::combined_improved && cfg.movers != 0 && cfg.movers != cfg.agents) {
    throw UsageError("--movers only applies to combined-improved mode");
  }
  if (cfg.resolved_movers() > cfg.agents) throw UsageError("--movers must not exceed --agents");

  const pha::ProblemInstance inst = pha::read_instance(a.instance);
  const pha::RunMetrics m = pha::run(inst, cfg);
  pha::json doc = pha::metrics_to_json(m, cfg, inst.graph.node_count());
  doc["instance"] = a.instance;
  const auto oracle = pha::shortest_path(inst.graph, inst.start, inst.goal);
  doc["oracle_length"] = oracle ? oracle->length : 0.0;
  if (!a.trace.empty()) pha::atomic_write(a.trace, pha::trace_to_ndjson(m.trace));
  if (a.out.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    pha::atomic_write(a.out, doc.dump(2) + "\n");
  }
  return m.success ? 0 : 2;
}

void add_run_flags(CLI::App* app, RunArgs& a) {
  app->add_option("--instance", a.instance, "Instance file (from generate)")->required()->check(CLI::ExistingFile);
  app->add_option("--high", a.high, "High-level search")->check(CLI::IsMember({"astar", "wina"}))->capture_default_str();
  app->add_option("--window", a.window, "WinA* window size; 0 picks round(n/50)")->capture_default_str();
  app->add_option("--window-scope", a.scope, "Window slots drawn from the whole open list or only unexpanded nodes")
      ->check(CLI::IsMember({"open-list", "unexpanded"}))
      ->capture_default_str();
  app->add_option("--nav", a.nav, "Navigation policy")->check(CLI::IsMember(kNavNames))->capture_default_str();
  app->add_option("--c1", a.c1, "I-A*DFS scale constant, in [0, 1]")->capture_default_str();
  app->add_option("--c2", a.c2, "I-A*DFS exponent, > 0")->capture_default_str();
  app->add_option("--seed", a.seed, "Tie-break seed (default: PHA_SEED or 0)");
  app->add_flag("--audit-routes", a.audit, "Compare aerial/known/tree route lengths on every episode");
  app->add_option("--trace", a.trace, "Write an NDJSON event trace here");
  app->add_option("--out", a.out, "Metrics JSON path (default: stdout)");
}

struct SweepArgs {
  std::string config;
  std::string out;
  std::size_t workers = 1;
};

int cmd_sweep(const SweepArgs& a) {
  pha::json j;
  try {
    j = pha::json::parse(pha::read_text(a.config));
  } catch (const pha::json::parse_error& e) {
    throw pha::ParseError(a.config + ": " + e.what());
  }
  pha::SweepSpec spec = pha::sweep_from_json(j);
  pha::apply_seed_override(spec);
  const auto rows = pha::run_sweep_to(spec, a.out, a.workers);
  std::size_t errors = 0;
  for (const auto& r : rows) errors += r.error.empty() ? 0 : 1;
  std::fprintf(stderr, "%zu rows, %zu errors -> %s\n", rows.size(), errors, a.out.c_str());
  return 0;
}

struct EvalArgs {
  std::string runs;
  std::string out;
  std::size_t tsp_cap = pha::kDefaultTspCap;
};

fs::path resolve_instance(const std::string& recorded, const fs::path& metrics_file) {
  const fs::path p(recorded);
  if (p.is_absolute() || fs::exists(p)) return p;
  return metrics_file.parent_path() / p;
}

int cmd_eval(const EvalArgs& a) {
  if (!fs::is_directory(a.runs)) throw UsageError("--runs must be a directory: " + a.runs);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(a.runs)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  struct Acc {
    std::vector<double> closed, tsp, mst, fuel, fuel_tsp;
  };
  std::map<std::pair<std::size_t, std::string>, Acc> groups;
  for (const fs::path& f : files) {
    const pha::json doc = pha::json::parse(pha::read_text(f));
    if (!doc.contains("instance") || !doc.contains("closed_nodes")) continue;  // not a metrics file
    if (!doc.value("success", false)) continue;
    pha::json meta;
    const pha::ProblemInstance inst = pha::read_instance(resolve_instance(doc.at("instance"), f), &meta);
    pha::RunMetrics m;
    m.success = true;
    m.closed_nodes = doc.at("closed_nodes").get<std::vector<pha::NodeId>>();
    m.total_fuel = doc.at("total_fuel").get<double>();
    const pha::ClosedSetMetric e = pha::evaluate_run(m, inst, a.tsp_cap);
    const pha::json spec = meta.value("spec", pha::json::object());
    const std::size_t size = spec.value("node_count", inst.graph.node_count());
    Acc& acc = groups[{size, spec.value("variant", std::string("regular"))}];
    acc.closed.push_back(static_cast<double>(e.closed.size()));
    acc.mst.push_back(e.mst);
    acc.fuel.push_back(e.fuel);
    if (e.tsp) {
      acc.tsp.push_back(*e.tsp);
      acc.fuel_tsp.push_back(e.fuel);
    }
  }
  std::string out = "graph_size,variant,closed_mean,tsp_mean,mst_mean,fuel_mean,ratio_tsp,ratio_mst,n_instances\n";
  for (const auto& [key, acc] : groups) {
    const auto closed = pha::summarize(acc.closed);
    const auto tsp = pha::summarize(acc.tsp);
    const auto mst = pha::summarize(acc.mst);
    const auto fuel = pha::summarize(acc.fuel);
    const auto fuel_tsp = pha::summarize(acc.fuel_tsp);
    const std::string ratio_tsp = tsp.n && tsp.mean > 0 ? pha::format_double(fuel_tsp.mean / tsp.mean) : "";
    const std::string ratio_mst = mst.mean > 0 ? pha::format_double(fuel.mean / mst.mean) : "";
    out += std::to_string(key.first) + "," + key.second + "," + pha::format_double(closed.mean) + "," +
           (tsp.n ? pha::format_double(tsp.mean) : "") + "," + pha::format_double(mst.mean) + "," +
           pha::format_double(fuel.mean) + "," + ratio_tsp + "," + ratio_mst + "," + std::to_string(fuel.n) + "\n";
  }
  pha::atomic_write(a.out, out);
  return 0;
}

struct ReportArgs {
  std::string results;
  std::string out;
};

int cmd_report(const ReportArgs& a) {
  const auto rows = pha::results_from_csv(pha::read_text(a.results));
  pha::write_report(a.out, pha::report(rows));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Physical A* search: instances, runs, sweeps and reports", "pha"};
  app.require_subcommand(1);

  GenerateArgs gen;
  CLI::App* generate = app.add_subcommand("generate", "Generate a random Delaunay graph and a start/goal instance");
  generate->add_option("--nodes", gen.nodes, "Number of nodes (>= 3)")->required();
  generate->add_option("--variant", gen.variant, "Graph variant")
      ->check(CLI::IsMember({"regular", "sparse", "dense"}))
      ->capture_default_str();
  generate->add_option("--delete-fraction", gen.delete_fraction, "Sparse: fraction of edges removed")
      ->capture_default_str();
  generate->add_option("--extra-edges", gen.extra_edges, "Dense: random edges added")->capture_default_str();
  generate->add_option("--seed", gen.seed, "Graph seed (default: PHA_SEED or 0)");
  generate->add_option("--pair-seed", gen.pair_seed, "Start/goal seed (default: derived from --seed)");
  generate->add_flag("--graph-only", gen.graph_only, "Write the graph without a start/goal pair");
  generate->add_option("--out", gen.out, "Output JSON path")->required();

  RunArgs single;
  CLI::App* run = app.add_subcommand("run", "Run single-agent PHA* on an instance");
  add_run_flags(run, single);

  RunArgs multi;
  multi.mode = "fuel";
  CLI::App* run_ma = app.add_subcommand("run-ma", "Run multi-agent PHA* on an instance");
  add_run_flags(run_ma, multi);
  run_ma->add_option("--mode", multi.mode, "Multi-agent mode")->check(CLI::IsMember(kModeNames))->capture_default_str();
  run_ma->add_option("--agents", multi.agents, "Number of agents p")->check(CLI::PositiveNumber)->capture_default_str();
  run_ma->add_option("--movers", multi.movers, "Agents moved per round m (combined-improved); 0 means p")
      ->capture_default_str();
  run_ma->add_option("--wt", multi.wt, "Time weight of C_total")->capture_default_str();
  run_ma->add_option("--wf", multi.wf, "Fuel weight of C_total")->capture_default_str();

  SweepArgs sw;
  CLI::App* sweep = app.add_subcommand("sweep", "Run an experiment grid from a JSON config");
  sweep->add_option("--config", sw.config, "Sweep config JSON")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", sw.out, "Output directory")->required();
  sweep->add_option("--workers", sw.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

  EvalArgs ev;
  CLI::App* eval = app.add_subcommand("eval", "Compare run fuel with TSP'/MST of the closed sets");
  eval->add_option("--runs", ev.runs, "Directory of metrics JSON files")->required();
  eval->add_option("--out", ev.out, "Output CSV")->required();
  eval->add_option("--tsp-cap", ev.tsp_cap, "Largest closed set solved exactly")->capture_default_str();

  ReportArgs rep;
  CLI::App* report = app.add_subcommand("report", "Aggregate a results.csv into tables and plot data");
  report->add_option("--results", rep.results, "results.csv from sweep")->required()->check(CLI::ExistingFile);
  report->add_option("--out", rep.out, "Output directory")->required();

  if (argc <= 1) {
    std::cerr << app.help();
    return 1;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "pha: " << e.what() << "\n";
    std::cerr << "run 'pha --help' for usage\n";
    return 1;
  }

  try {
    if (*generate) return cmd_generate(gen);
    if (*run) return cmd_run(single);
    if (*run_ma) return cmd_run(multi);
    if (*sweep) return cmd_sweep(sw);
    if (*eval) return cmd_eval(ev);
    if (*report) return cmd_report(rep);
  } catch (const UsageError& e) {
    std::cerr << "pha: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "pha: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
