#include <gtest/gtest.h>

#include <cmath>

#include "instances.hpp"
#include "uplan/error.hpp"
#include "uplan/planner.hpp"
#include "uplan/policy_document.hpp"
#include "uplan/simulator.hpp"

namespace uplan {
namespace {

OptimalPolicyStrategy optimal_for(const UGraph& g) {
  const RepresentingGraph rg = build_representing_graph(g);
  const Solution s = solve(rg);
  return OptimalPolicyStrategy(g, make_policy_document(rg, s.policy, s.values.root_value));
}

TEST(SplitMix64, ReferenceOutputs) {
  SplitMix64 rng(0);
  EXPECT_EQ(rng.next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(rng.next(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(rng.next(), 0x06c45d188009454fULL);
}

TEST(SplitMix64, UniformAndBelowStayInRange) {
  SplitMix64 rng(99);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(rng.below(7), 7u);
  }
  EXPECT_NE(SplitMix64::substream(1, 0).next(), SplitMix64::substream(1, 1).next());
}

TEST(Strategies, DetourExactValues) {
  const UGraph g = testing::detour(0.8);
  EXPECT_NEAR(evaluate_strategy_exact(g, optimal_for(g)).expected_cost, 7.6, 1e-12);
  EXPECT_NEAR(evaluate_strategy_exact(g, PessimisticDirect()).expected_cost, 10.0, 1e-12);
  // Optimistic: 6 when the switch is on, 2 + 2 + 10 when it is off.
  EXPECT_NEAR(evaluate_strategy_exact(g, OptimisticReplanner()).expected_cost, 0.8 * 6 + 0.2 * 14, 1e-12);
}

TEST(Strategies, BridgeBaselinesExplore) {
  const UGraph g = testing::bridge();
  const OptimisticReplanner optimistic;
  const PessimisticDirect pessimistic;
  for (const Strategy* s : {static_cast<const Strategy*>(&optimistic), static_cast<const Strategy*>(&pessimistic)}) {
    const PolicyValue v = evaluate_strategy_exact(g, *s);
    EXPECT_NEAR(v.expected_cost, 4.0, 1e-12) << s->name();
    EXPECT_NEAR(v.reach_probability, 0.8, 1e-12) << s->name();
  }
}

TEST(StrategyProperties, OptimalMatchesPlannerAndDominatesBaselines) {
  for (const UGraph& g : testing::mixed_corpus(80)) {
    const RepresentingGraph rg = build_representing_graph(g);
    const Solution s = solve(rg);
    const OptimalPolicyStrategy opt(g, make_policy_document(rg, s.policy, s.values.root_value));
    const PolicyValue v = evaluate_strategy_exact(g, opt);
    EXPECT_NEAR(v.expected_cost, s.values.root_value, 1e-9);
    EXPECT_NEAR(v.reach_probability, reach_probability(rg, s.policy), 1e-12);
    const PolicyValue o = evaluate_strategy_exact(g, OptimisticReplanner());
    const PolicyValue p = evaluate_strategy_exact(g, PessimisticDirect());
    EXPECT_LE(v.expected_cost, o.expected_cost + 1e-9);
    EXPECT_LE(v.expected_cost, p.expected_cost + 1e-9);
    // Every strategy explores until the goal is reached or proved unreachable.
    EXPECT_NEAR(o.reach_probability, v.reach_probability, 1e-12);
    EXPECT_NEAR(p.reach_probability, v.reach_probability, 1e-12);
  }
}

class Stubborn : public Strategy {
 public:
  std::string name() const override { return "stubborn"; }
  Decision decide(const Configuration&) const override { return HaltDecision{}; }
};

class Teleporter : public Strategy {
 public:
  std::string name() const override { return "teleporter"; }
  Decision decide(const Configuration& c) const override {
    if (c.current == c.goal) return FinishDecision{0.0};
    return MoveDecision{{}, c.goal};
  }
};

TEST(RunStrategy, MisbehaviourIsRejected) {
  const UGraph g = testing::detour();
  EXPECT_THROW(run_strategy(g, Stubborn(), World{{true}, 1.0}), PreconditionError);
  EXPECT_THROW(run_strategy(g, Teleporter(), World{{true}, 1.0}), PreconditionError);
}

TEST(OptimalPolicyStrategy, RejectsForeignDocument) {
  const UGraph a = testing::detour(0.8);
  const UGraph b = testing::detour(0.1);
  const RepresentingGraph rg = build_representing_graph(a);
  const Solution s = solve(rg);
  EXPECT_THROW(OptimalPolicyStrategy(b, make_policy_document(rg, s.policy, s.values.root_value)),
               PreconditionError);
}

TEST(MonteCarlo, ThreadCountDoesNotChangeResults) {
  for (const UGraph& g : testing::mixed_corpus(6)) {
    const auto opt = optimal_for(g);
    const TrialStats one = monte_carlo(g, opt, 2000, 7, 1);
    EXPECT_EQ(monte_carlo(g, opt, 2000, 7, 3), one);
    EXPECT_EQ(monte_carlo(g, opt, 2000, 7, 8), one);
  }
}

TEST(MonteCarlo, ConvergesToExactValue) {
  for (const UGraph& g : {testing::detour(0.8), testing::bridge(), testing::two_switch()}) {
    const auto opt = optimal_for(g);
    const PolicyValue exact = evaluate_strategy_exact(g, opt);
    const TrialStats st = monte_carlo(g, opt, 20000, 42);
    EXPECT_EQ(st.runs, 20000u);
    EXPECT_LE(std::abs(st.mean_cost - exact.expected_cost), 4 * st.stderr_cost);
    EXPECT_NEAR(st.reach_fraction, exact.reach_probability, 0.02);
  }
}

TEST(MonteCarlo, SingleRunIsDegenerate) {
  const UGraph g = testing::detour();
  const TrialStats st = monte_carlo(g, PessimisticDirect(), 1, 3);
  EXPECT_TRUE(st.degenerate);
  EXPECT_EQ(st.stderr_cost, 0.0);
  EXPECT_EQ(st.mean_cost, 10.0);
  EXPECT_EQ(st.min_cost, 10.0);
  EXPECT_EQ(st.max_cost, 10.0);
}

TEST(TrialStats, JsonKeys) {
  TrialStats st;
  st.runs = 2;
  st.mean_cost = 1.5;
  const std::string json = to_json(st);
  for (const char* key : {"\"runs\":2", "\"mean_cost\":1.5", "\"stderr\"", "\"reach_fraction\"", "\"min_cost\"",
                          "\"max_cost\""}) {
    EXPECT_NE(json.find(key), std::string::npos) << key;
  }
}

TEST(SampleWorld, FrequencyMatchesProbability) {
  const UGraph g = testing::two_switch();
  SplitMix64 rng(5);
  int a_on = 0, b_on = 0;
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    const World w = sample_world(g, rng);
    a_on += w.on[0];
    b_on += w.on[1];
  }
  // Four standard deviations of a binomial proportion.
  EXPECT_NEAR(a_on / double(n), 0.8, 4 * std::sqrt(0.8 * 0.2 / n));
  EXPECT_NEAR(b_on / double(n), 0.5, 4 * std::sqrt(0.25 / n));
}

}  // namespace
}  // namespace uplan
