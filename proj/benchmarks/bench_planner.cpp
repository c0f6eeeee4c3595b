#include <benchmark/benchmark.h>

#include "instances.hpp"
#include "uplan/decision_graph.hpp"
#include "uplan/oracle.hpp"
#include "uplan/planner.hpp"
#include "uplan/policy_document.hpp"
#include "uplan/simulator.hpp"

namespace {

using namespace uplan;

// 50-vertex ladder with 4, 8 or 12 switches.
void BM_BuildRepresentingGraph(benchmark::State& state) {
  const UGraph g = testing::ladder(static_cast<std::size_t>(state.range(0)));
  std::size_t nodes = 0;
  for (auto _ : state) {
    const RepresentingGraph rg = build_representing_graph(g);
    nodes = rg.node_count();
    benchmark::DoNotOptimize(nodes);
  }
  state.counters["nodes"] = static_cast<double>(nodes);
}
BENCHMARK(BM_BuildRepresentingGraph)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMicrosecond);

void BM_Solve(benchmark::State& state) {
  const UGraph g = testing::ladder(static_cast<std::size_t>(state.range(0)));
  const RepresentingGraph rg = build_representing_graph(g);
  std::size_t visits = 0;
  for (auto _ : state) {
    const Solution s = solve(rg);
    visits = s.visits;
    benchmark::DoNotOptimize(s.values.root_value);
  }
  state.counters["visits"] = static_cast<double>(visits);
  state.counters["nodes+arcs"] = static_cast<double>(rg.node_count() + rg.arc_count());
}
BENCHMARK(BM_Solve)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMicrosecond);

void BM_LayeredExpectimax(benchmark::State& state) {
  const UGraph g = testing::ladder(static_cast<std::size_t>(state.range(0)), 20);
  for (auto _ : state) benchmark::DoNotOptimize(layered_expectimax_value(g));
}
BENCHMARK(BM_LayeredExpectimax)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_MonteCarlo(benchmark::State& state) {
  const UGraph g = testing::ladder(8);
  const RepresentingGraph rg = build_representing_graph(g);
  const Solution s = solve(rg);
  const OptimalPolicyStrategy opt(g, make_policy_document(rg, s.policy, s.values.root_value));
  for (auto _ : state) {
    benchmark::DoNotOptimize(monte_carlo(g, opt, 1000, 7, static_cast<unsigned>(state.range(0))));
  }
}
BENCHMARK(BM_MonteCarlo)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
