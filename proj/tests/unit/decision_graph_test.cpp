#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <string>

#include "instances.hpp"
#include "uplan/decision_graph.hpp"
#include "uplan/error.hpp"

namespace uplan {
namespace {

using Kind = ConfigClass::Kind;

std::set<std::string> state_keys(const RepresentingGraph& rg) {
  std::set<std::string> keys;
  for (const StateNode& s : rg.states) keys.insert(canonical_key(s.config));
  return keys;
}

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

TEST(CanonicalKey, Format) {
  const UGraph g = testing::two_switch();
  Configuration c = Configuration::initial(g);
  EXPECT_EQ(canonical_key(c), "X|a=?,b=?");
  c.knowledge.set(0, SwitchStatus::kOn);
  c.knowledge.set(1, SwitchStatus::kOff);
  EXPECT_EQ(canonical_key(c.at(3)), "G|a=on,b=off");
  const UGraph s = testing::single();
  EXPECT_EQ(canonical_key(Configuration::initial(s)), "Z|");
}

TEST(BuildRepresentingGraph, Detour) {
  const UGraph g = testing::detour();
  const RepresentingGraph rg = build_representing_graph(g);
  EXPECT_FALSE(rg.has_virtual_root());
  EXPECT_EQ(state_keys(rg), (std::set<std::string>{"A|cd=?", "B|cd=?", "C|cd=on", "C|cd=off"}));
  EXPECT_EQ(rg.states.size(), 4u);
  EXPECT_EQ(rg.natures.size(), 1u);
  // Two action arcs from A plus two nature branches.
  EXPECT_EQ(rg.arc_count(), 4u);
  const StateNode& root = rg.states[rg.root.id];
  EXPECT_EQ(canonical_key(root.config), "A|cd=?");
  ASSERT_EQ(root.actions.size(), 2u);
  EXPECT_EQ(root.actions[0].move_cost, 2.0);
  EXPECT_FALSE(root.actions[0].target.is_state());
  EXPECT_EQ(root.actions[1].move_cost, 10.0);
  EXPECT_TRUE(root.actions[1].target.is_state());

  const NatureNode& n = rg.natures[root.actions[0].target.id];
  ASSERT_EQ(n.branches.size(), 2u);
  EXPECT_NEAR(n.branches[0].probability, 0.8, 1e-15);
  EXPECT_EQ(rg.states[n.branches[0].state].cls, ConfigClass::good(4.0));
  EXPECT_NEAR(n.branches[1].probability, 0.2, 1e-15);
  EXPECT_EQ(rg.states[n.branches[1].state].cls, ConfigClass::good(12.0));
}

TEST(BuildRepresentingGraph, BridgeHasVirtualRoot) {
  const UGraph g = testing::bridge();
  const RepresentingGraph rg = build_representing_graph(g);
  ASSERT_TRUE(rg.has_virtual_root());
  const NatureNode& root = rg.natures[rg.root.id];
  EXPECT_FALSE(root.source.has_value());
  ASSERT_EQ(root.branches.size(), 2u);
  EXPECT_EQ(rg.states[root.branches[0].state].cls, ConfigClass::good(5.0));
  EXPECT_EQ(rg.states[root.branches[1].state].cls, ConfigClass::bad());
  EXPECT_EQ(rg.states.size(), 2u);
}

TEST(BuildRepresentingGraph, SingleVertex) {
  const UGraph g = testing::single();
  const RepresentingGraph rg = build_representing_graph(g);
  ASSERT_EQ(rg.states.size(), 1u);
  EXPECT_TRUE(rg.natures.empty());
  EXPECT_EQ(rg.states[0].cls, ConfigClass::good(0.0));
}

TEST(BuildRepresentingGraph, StateNodesAreUniquePerConfiguration) {
  for (const UGraph& g : testing::corpus(60)) {
    const RepresentingGraph rg = build_representing_graph(g);
    EXPECT_EQ(state_keys(rg).size(), rg.states.size());
    for (const StateNode& s : rg.states) {
      EXPECT_EQ(s.cls, classify(s.config));
      EXPECT_NE(s.cls.kind, Kind::kUncontrolled);
    }
  }
}

TEST(BuildRepresentingGraph, LimitsNameTheCap) {
  const UGraph g = testing::detour();
  BuildLimits limits;
  limits.max_switches = 0;
  try {
    build_representing_graph(g, limits);
    FAIL();
  } catch (const LimitError& e) {
    EXPECT_NE(std::string(e.what()).find("max_switches"), std::string::npos);
  }
  limits = BuildLimits{};
  limits.max_nodes = 2;
  try {
    build_representing_graph(g, limits);
    FAIL();
  } catch (const LimitError& e) {
    EXPECT_NE(std::string(e.what()).find("max_nodes"), std::string::npos);
  }
}

TEST(CheckMarkov, DetourLayers) {
  const UGraph g = testing::detour();
  const MarkovReport r = check_markov(build_representing_graph(g));
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.layers, (std::map<std::size_t, std::size_t>{{0, 2}, {1, 2}}));
}

TEST(CheckMarkov, CorpusGraphsAreWellFormed) {
  for (const UGraph& g : testing::mixed_corpus(80)) {
    const MarkovReport r = check_markov(build_representing_graph(g));
    EXPECT_TRUE(r.ok) << (r.failures.empty() ? "" : r.failures.front());
  }
}

bool has_failure(const MarkovReport& r, const std::string& prefix) {
  return std::any_of(r.failures.begin(), r.failures.end(),
                     [&](const std::string& f) { return f.rfind(prefix, 0) == 0; });
}

TEST(CheckMarkov, DetectsCorruption) {
  const UGraph g = testing::detour();
  const RepresentingGraph good = build_representing_graph(g);

  RepresentingGraph rg = good;
  rg.natures[0].branches[0].probability = 0.7;
  EXPECT_TRUE(has_failure(check_markov(rg), "normalization:"));

  rg = good;
  for (StateNode& s : rg.states) {
    if (s.cls.is_terminal()) {
      s.actions.push_back(good.states[good.root.id].actions[0]);
      break;
    }
  }
  EXPECT_TRUE(has_failure(check_markov(rg), "terminal action:"));

  rg = good;
  rg.states[rg.root.id].actions[0].move_cost = 0.0;
  EXPECT_TRUE(has_failure(check_markov(rg), "cost:"));

  rg = good;
  // Make a nature branch point back at the root: a cycle that also fails to
  // refine knowledge.
  rg.natures[0].branches[1].state = rg.root.id;
  const MarkovReport r = check_markov(rg);
  EXPECT_FALSE(r.ok);
  EXPECT_TRUE(has_failure(r, "monotonicity:"));
  EXPECT_TRUE(has_failure(r, "acyclicity:"));
}

TEST(GraphStats, Detour) {
  const UGraph g = testing::detour();
  const GraphStats s = graph_stats(build_representing_graph(g));
  EXPECT_EQ(s.states, 4u);
  EXPECT_EQ(s.natures, 1u);
  EXPECT_EQ(s.arcs, 4u);
  EXPECT_EQ(s.layers, 2u);
  std::ostringstream os;
  write_stats(os, s);
  EXPECT_EQ(os.str(), "states=4\nnatures=1\narcs=4\nlayers=2\n");
}

TEST(ToDot, DetourShapesAndLabels) {
  const UGraph g = testing::detour();
  const RepresentingGraph rg = build_representing_graph(g);
  const std::string dot = to_dot(rg);
  EXPECT_EQ(dot.rfind("digraph", 0), 0u);
  EXPECT_EQ(count_of(dot, "shape=box"), 4u);
  EXPECT_EQ(count_of(dot, "shape=diamond"), 1u);
  EXPECT_NE(dot.find("GoodTerminal(4)"), std::string::npos);
  EXPECT_NE(dot.find("GoodTerminal(12)"), std::string::npos);
  EXPECT_EQ(count_of(dot, "style=dashed"), 2u);
}

TEST(ToDot, PolicyPrunesUnchosenArcs) {
  const UGraph g = testing::detour(0.1);
  const RepresentingGraph rg = build_representing_graph(g);
  Policy p;
  p.choice.assign(rg.states.size(), std::nullopt);
  p.choice[rg.root.id] = 1;  // direct edge to B
  const std::string dot = to_dot(rg, &p);
  EXPECT_EQ(count_of(dot, "shape=box"), 2u);
  EXPECT_EQ(count_of(dot, "shape=diamond"), 0u);

  Policy broken;
  broken.choice.assign(rg.states.size(), std::nullopt);
  EXPECT_THROW(to_dot(rg, &broken), PreconditionError);
}

}  // namespace
}  // namespace uplan
