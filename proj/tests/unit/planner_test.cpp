#include <gtest/gtest.h>

#include <functional>

#include "instances.hpp"
#include "uplan/error.hpp"
#include "uplan/planner.hpp"

namespace uplan {
namespace {

struct Expected {
  const char* name;
  UGraph graph;
  double value;
  double reach;
};

// Values worked by hand from the instance definitions.
std::vector<Expected> hand_values() {
  return {
      {"detour_p08", testing::detour(0.8), 2 + 0.8 * 4 + 0.2 * 12, 1.0},
      {"detour_p01", testing::detour(0.1), 10.0, 1.0},
      {"bridge", testing::bridge(), 0.8 * 5, 0.8},
      {"two_switch", testing::two_switch(), 2 * 0.9, 0.9},
      {"chain", testing::chain(), 1 + 0.5 * 1, 0.5},
      {"series", testing::series(), 0.8 * (2 + 0.5 * 3), 0.4},
      {"single", testing::single(), 0.0, 1.0},
  };
}

TEST(Solve, HandComputedInstances) {
  for (const Expected& e : hand_values()) {
    const RepresentingGraph rg = build_representing_graph(e.graph);
    const Solution s = solve(rg);
    EXPECT_NEAR(s.values.root_value, e.value, 1e-12) << e.name;
    EXPECT_NEAR(reach_probability(rg, s.policy), e.reach, 1e-12) << e.name;
  }
}

TEST(Solve, DetourChoosesDetourOnlyWhenLikely) {
  const UGraph hi = testing::detour(0.8);
  const RepresentingGraph rg_hi = build_representing_graph(hi);
  EXPECT_EQ(solve(rg_hi).policy.choice[rg_hi.root.id], 0u);
  const UGraph lo = testing::detour(0.1);
  const RepresentingGraph rg_lo = build_representing_graph(lo);
  EXPECT_EQ(solve(rg_lo).policy.choice[rg_lo.root.id], 1u);
}

TEST(Solve, TiesGoToLowestArc) {
  // Two equally long certain routes: A-B-G (1+1) and A-C-G (1+1), each via an
  // uncontrolled vertex with a probability-one switch to the goal.
  const UGraph g = load_ugraph(R"({"vertices":["A","B","C","G"],
    "edges":[{"id":"ab","ends":["A","B"],"weight":1},{"id":"ac","ends":["A","C"],"weight":1}],
    "switches":[{"id":"bg","ends":["B","G"],"weight":1,"prob":1},
                {"id":"cg","ends":["C","G"],"weight":1,"prob":1}],
    "start":"A","goal":"G"})");
  const RepresentingGraph rg = build_representing_graph(g);
  const Solution s = solve(rg);
  ASSERT_GE(rg.states[rg.root.id].actions.size(), 2u);
  EXPECT_EQ(s.policy.choice[rg.root.id], 0u);
  EXPECT_NEAR(s.values.root_value, 2.0, 1e-12);
}

TEST(Solve, TerminalValue) {
  StateNode s;
  s.cls = ConfigClass::good(7.5);
  EXPECT_EQ(terminal_value(s), 7.5);
  s.cls = ConfigClass::bad();
  EXPECT_EQ(terminal_value(s), 0.0);
}

TEST(SolveProperties, VisitsAreLinearInGraphSize) {
  for (const UGraph& g : testing::mixed_corpus(80)) {
    const RepresentingGraph rg = build_representing_graph(g);
    const Solution s = solve(rg);
    EXPECT_LE(s.visits, 2 * (rg.node_count() + rg.arc_count()));
  }
}

TEST(SolveProperties, EvaluatingTheOptimalPolicyReproducesItsValues) {
  for (const UGraph& g : testing::mixed_corpus(80)) {
    const RepresentingGraph rg = build_representing_graph(g);
    const Solution s = solve(rg);
    const ValueTable v = evaluate_policy(rg, s.policy);
    EXPECT_NEAR(v.root_value, s.values.root_value, 1e-9);
    for (std::size_t i = 0; i < rg.states.size(); ++i) {
      EXPECT_NEAR(v.state_value[i], s.values.state_value[i], 1e-9);
    }
  }
}

// Independent check: enumerate every complete policy of small graphs and
// evaluate each by direct recursion.
double recursive_value(const RepresentingGraph& rg, const Policy& p, NodeRef r) {
  if (r.is_state()) {
    const StateNode& s = rg.states[r.id];
    if (s.cls.is_terminal()) return s.cls.kind == ConfigClass::Kind::kGoodTerminal ? s.cls.remaining : 0.0;
    const ActionArc& a = s.actions[*p.choice[r.id]];
    return a.move_cost + recursive_value(rg, p, a.target);
  }
  double sum = 0.0;
  for (const NatureBranch& b : rg.natures[r.id].branches) {
    sum += b.probability * recursive_value(rg, p, NodeRef::state(b.state));
  }
  return sum;
}

void for_each_policy(const RepresentingGraph& rg, std::size_t budget, const std::function<void(const Policy&)>& f) {
  std::vector<std::size_t> active;
  std::size_t product = 1;
  for (const StateNode& s : rg.states) {
    if (s.cls.is_terminal()) continue;
    active.push_back(s.id);
    product *= s.actions.size();
    if (product > budget) return;
  }
  Policy p;
  p.choice.assign(rg.states.size(), std::nullopt);
  for (std::size_t id : active) p.choice[id] = 0;
  for (std::size_t n = 0; n < product; ++n) {
    std::size_t r = n;
    for (std::size_t id : active) {
      const std::size_t m = rg.states[id].actions.size();
      p.choice[id] = r % m;
      r /= m;
    }
    f(p);
  }
}

TEST(SolveProperties, OptimalDominatesEveryEnumeratedPolicy) {
  std::size_t checked = 0;
  for (const UGraph& g : testing::mixed_corpus(80)) {
    const RepresentingGraph rg = build_representing_graph(g);
    const Solution s = solve(rg);
    EXPECT_NEAR(recursive_value(rg, s.policy, rg.root), s.values.root_value, 1e-9);
    for_each_policy(rg, 4096, [&](const Policy& p) {
      EXPECT_LE(s.values.root_value, recursive_value(rg, p, rg.root) + 1e-9);
      EXPECT_NEAR(evaluate_policy(rg, p).root_value, recursive_value(rg, p, rg.root), 1e-9);
      ++checked;
    });
  }
  EXPECT_GT(checked, 200u);
}

TEST(EvaluatePolicy, RejectsIncompletePolicy) {
  const UGraph g = testing::detour();
  const RepresentingGraph rg = build_representing_graph(g);
  Policy p;
  p.choice.assign(rg.states.size(), std::nullopt);
  EXPECT_THROW(evaluate_policy(rg, p), PreconditionError);
  p.choice[rg.root.id] = 5;
  EXPECT_THROW(evaluate_policy(rg, p), PreconditionError);
}

TEST(TopologicalOrder, ParentsPrecedeChildren) {
  for (const UGraph& g : testing::mixed_corpus(40)) {
    const RepresentingGraph rg = build_representing_graph(g);
    const auto order = topological_order(rg);
    ASSERT_EQ(order.size(), rg.node_count());
    std::vector<std::size_t> spos(rg.states.size()), npos(rg.natures.size());
    for (std::size_t i = 0; i < order.size(); ++i) (order[i].is_state() ? spos : npos)[order[i].id] = i;
    auto pos = [&](NodeRef r) { return r.is_state() ? spos[r.id] : npos[r.id]; };
    EXPECT_EQ(order.front(), rg.root);
    for (const StateNode& s : rg.states) {
      for (const ActionArc& a : s.actions) EXPECT_LT(spos[s.id], pos(a.target));
    }
    for (const NatureNode& n : rg.natures) {
      for (const NatureBranch& b : n.branches) EXPECT_LT(npos[n.id], spos[b.state]);
    }
  }
}

TEST(PolicySubgraph, PreservesValueAndReach) {
  for (const UGraph& g : testing::mixed_corpus(60)) {
    const RepresentingGraph rg = build_representing_graph(g);
    const Solution s = solve(rg);
    const RepresentingGraph sub = policy_subgraph(rg, s.policy);
    EXPECT_LE(sub.node_count(), rg.node_count());
    Policy first;
    first.choice.assign(sub.states.size(), std::nullopt);
    for (const StateNode& st : sub.states) {
      if (!st.cls.is_terminal()) {
        EXPECT_EQ(st.actions.size(), 1u);
        first.choice[st.id] = 0;
      }
    }
    EXPECT_NEAR(evaluate_policy(sub, first).root_value, s.values.root_value, 1e-9);
    EXPECT_NEAR(reach_probability(sub, first), reach_probability(rg, s.policy), 1e-12);
    EXPECT_TRUE(check_markov(sub).ok);
  }
}

}  // namespace
}  // namespace uplan
