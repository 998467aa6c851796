// Generate a graph, run WinA* with I-A*DFS navigation, compare with Dijkstra.
#include <cstdio>

#include "pha/pha.hpp"

int main() {
  pha::GraphSpec spec;
  spec.node_count = 500;
  spec.seed = 7;
  pha::ProblemInstance inst = pha::sample_instance(pha::generate(spec), 11);

  pha::HighLevelPolicy high;  // WinA*, window n/50
  pha::NavigationPolicy nav;  // I-A*DFS, c1 = 0.25, c2 = 2.5
  const pha::RunMetrics run = pha::run_single_agent(inst, high, nav);
  const auto oracle = pha::shortest_path(inst.graph, inst.start, inst.goal);

  std::printf("path %.6f (oracle %.6f), fuel %.6f, closed %zu\n", run.path.length, oracle->length,
              run.total_fuel, run.closed);
  return 0;
}
