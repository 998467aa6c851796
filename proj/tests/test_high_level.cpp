#include <gtest/gtest.h>

#include "support.hpp"

using namespace pha;
using namespace testing_support;

TEST(WinaCost, Examples) {
  EXPECT_EQ(wina_cost(3, 2), 6);
  EXPECT_EQ(wina_cost(5, 0), 0);
  EXPECT_EQ(wina_cost(0, 0.7), 0);
}

TEST(HighLevelPolicy, Windows) {
  EXPECT_EQ(default_window(10), 1u);
  EXPECT_EQ(default_window(500), 10u);
  EXPECT_EQ(default_window(2000), 40u);
  EXPECT_EQ(default_window(74), 1u);
  EXPECT_EQ(default_window(75), 2u);
  EXPECT_EQ((HighLevelPolicy{HighKind::astar, 7}.window_for(500)), 1u);
  EXPECT_EQ((HighLevelPolicy{HighKind::wina, 0}.window_for(500)), 10u);
  EXPECT_EQ((HighLevelPolicy{HighKind::wina, 3}.window_for(500)), 3u);
  EXPECT_EQ(parse_window_scope("unexpanded"), WindowScope::unexpanded);
  EXPECT_THROW(parse_window_scope("all"), ArgumentError);
  EXPECT_THROW(parse_high("ida"), ArgumentError);
}

TEST(SingleAgent, TwoNodeGraph) {
  const ProblemInstance inst = make_instance({{0.1, 0.2}, {0.4, 0.6}}, {{0, 1}}, 0, 1);
  for (NavKind kind : all_navs()) {
    const RunMetrics m = run_single_agent(inst, HighLevelPolicy{}, NavigationPolicy{kind});
    ASSERT_TRUE(m.success);
    EXPECT_EQ(m.path.nodes, (std::vector<NodeId>{0, 1}));
    EXPECT_NEAR(m.path.length, 0.5, 1e-15);
    EXPECT_NEAR(m.total_fuel, 0.5, 1e-15);
    EXPECT_EQ(m.elapsed_time, m.total_fuel);
  }
}

TEST(SingleAgent, NoPathIsAResultNotACrash) {
  const ProblemInstance inst = make_instance({{0, 0}, {0.5, 0}, {1, 1}}, {{0, 1}}, 0, 2);
  const RunMetrics m = run_single_agent(inst, HighLevelPolicy{}, NavigationPolicy{});
  EXPECT_FALSE(m.success);
  EXPECT_TRUE(m.path.nodes.empty());
}

TEST(SingleAgent, OptimalAcrossPoliciesAndVariants) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    for (Variant v : {Variant::regular, Variant::sparse, Variant::dense}) {
      const ProblemInstance inst = random_instance(1000 + seed, 150, v);
      const double oracle = oracle_length(inst);
      for (HighKind hk : {HighKind::astar, HighKind::wina}) {
        for (WindowScope scope : {WindowScope::open_list, WindowScope::unexpanded}) {
          for (NavKind nk : all_navs()) {
            const RunMetrics m = run_single_agent(inst, HighLevelPolicy{hk, 5, scope}, NavigationPolicy{nk});
            ASSERT_TRUE(m.success);
            EXPECT_NEAR(m.path.length, oracle, 1e-9);
            EXPECT_NEAR(path_length(inst.graph, m.path.nodes), m.path.length, 1e-9);
            EXPECT_EQ(missing_mandatory(inst, m.expansion_order), 0u);
          }
        }
      }
    }
  }
}

TEST(SingleAgent, AStarExpansionOrderMatchesReference) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ProblemInstance inst = random_instance(2000 + seed, 200, static_cast<Variant>(seed % 3));
    const RunMetrics m = run_single_agent(inst, HighLevelPolicy{HighKind::astar}, NavigationPolicy{NavKind::adfs});
    EXPECT_EQ(m.expansion_order, reference_astar(inst.graph, inst.start, inst.goal).expansion_order);
  }
}

TEST(SingleAgent, FuelMonotoneAndGoalClosesLast) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ProblemInstance inst = random_instance(3000 + seed, 200);
    RunOptions opt;
    opt.record_trace = true;
    const RunMetrics m = run_single_agent(inst, HighLevelPolicy{}, NavigationPolicy{}, opt);
    double fuel = 0.0;
    for (const TraceEvent& e : m.trace) {
      EXPECT_GE(e.fuel, fuel);
      fuel = e.fuel;
    }
    ASSERT_FALSE(m.trace.empty());
    EXPECT_EQ(m.trace.back().kind, "close");
    EXPECT_EQ(m.trace.back().node, inst.goal);
    EXPECT_EQ(m.closed_nodes.back(), inst.goal);
  }
}

TEST(SingleAgent, WindowPaysOffOnTwoClusters) {
  const ProblemInstance inst = two_cluster_instance(4);
  for (NavKind nav : {NavKind::known, NavKind::aerial, NavKind::adfs}) {
    const RunMetrics astar = run_single_agent(inst, HighLevelPolicy{HighKind::astar}, NavigationPolicy{nav});
    const RunMetrics wina = run_single_agent(inst, HighLevelPolicy{HighKind::wina, 8}, NavigationPolicy{nav});
    ASSERT_TRUE(astar.success && wina.success);
    EXPECT_EQ(astar.path.length, wina.path.length);
    EXPECT_LT(wina.total_fuel, astar.total_fuel) << to_string(nav);
    EXPECT_EQ(missing_mandatory(inst, wina.expansion_order), 0u);
  }
}

TEST(SingleAgent, DeterministicGivenInputs) {
  const ProblemInstance inst = random_instance(77, 300);
  const RunMetrics a = run_single_agent(inst, HighLevelPolicy{}, NavigationPolicy{});
  const RunMetrics b = run_single_agent(inst, HighLevelPolicy{}, NavigationPolicy{});
  EXPECT_EQ(a.total_fuel, b.total_fuel);
  EXPECT_EQ(a.expansion_order, b.expansion_order);
}
