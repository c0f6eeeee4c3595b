#pragma once

#include <cstddef>
#include <vector>

#include "uplan/decision_graph.hpp"

namespace uplan {

// Expected cost-to-go per node under some policy.
struct ValueTable {
  std::vector<double> state_value;
  std::vector<double> nature_value;
  double root_value = 0.0;
};

struct Solution {
  Policy policy;
  ValueTable values;
  // Node entries plus arc relaxations performed by the backward pass.
  std::size_t visits = 0;
};

// Cost of the finishing action at a terminal: remaining pessimistic distance
// for good terminals, 0 for bad ones.
double terminal_value(const StateNode& s);

// Optimal policy by memoized backward induction over the DAG. Ties go to the
// lowest action-arc index.
Solution solve(const RepresentingGraph& rg);

// Expected cost-to-go of a fixed policy at every node. Throws
// PreconditionError when incomplete.
ValueTable evaluate_policy(const RepresentingGraph& rg, const Policy& policy);

// Probability mass that ends in a good terminal, pushed forward from the root
// in topological order.
double reach_probability(const RepresentingGraph& rg, const Policy& policy);

// Nodes in topological order (parents before children).
std::vector<NodeRef> topological_order(const RepresentingGraph& rg);

// Copy restricted to chosen arcs and the nodes they reach, renumbered in
// original order. The matching policy picks arc 0 everywhere.
RepresentingGraph policy_subgraph(const RepresentingGraph& rg, const Policy& policy);

}  // namespace uplan
