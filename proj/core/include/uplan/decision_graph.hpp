#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uplan/transitions.hpp"

namespace uplan {

struct NodeRef {
  enum class Kind { kState, kNature };
  Kind kind = Kind::kState;
  std::size_t id = 0;

  static NodeRef state(std::size_t id) { return {Kind::kState, id}; }
  static NodeRef nature(std::size_t id) { return {Kind::kNature, id}; }
  bool is_state() const { return kind == Kind::kState; }
  bool operator==(const NodeRef&) const = default;
};

struct ActionArc {
  GenericTransition action;
  double move_cost = 0.0;
  // A terminal state (reached with probability 1) or a nature node.
  NodeRef target;
};

// Controlled configuration: Active, or a terminal carrying the implicit
// finishing action.
struct StateNode {
  std::size_t id = 0;
  Configuration config;
  ConfigClass cls;
  std::vector<ActionArc> actions;
};

struct NatureBranch {
  double probability = 0.0;
  std::size_t state = 0;
};

// Revelation step at an uncontrolled configuration. The virtual root has no
// source state and no action.
struct NatureNode {
  std::size_t id = 0;
  std::optional<std::size_t> source;
  std::optional<std::size_t> source_arc;
  Configuration config;
  std::vector<NatureBranch> branches;
};

// Reachable decision DAG rooted at the initial configuration. Plain data so
// that tests can assemble or corrupt graphs by hand.
struct RepresentingGraph {
  const UGraph* graph = nullptr;
  std::vector<StateNode> states;
  std::vector<NatureNode> natures;
  NodeRef root;

  std::size_t node_count() const { return states.size() + natures.size(); }
  // Action arcs plus nature branches.
  std::size_t arc_count() const;
  bool has_virtual_root() const { return root.kind == NodeRef::Kind::kNature; }
};

// Chosen action-arc index per state; unset for terminals (implicit finish).
struct Policy {
  std::vector<std::optional<std::size_t>> choice;
};

// Throws PreconditionError unless every Active state has a valid choice and
// no terminal has one.
void require_complete(const RepresentingGraph& rg, const Policy& policy);

struct BuildLimits {
  std::size_t max_switches = 16;
  std::size_t max_nodes = 5'000'000;
  std::size_t max_revealed = kDefaultMaxRevealed;
};

// "vertex|id=?,id=on,id=off" in switch declaration order.
std::string canonical_key(const Configuration& c);

// Throws LimitError naming the cap that was exceeded.
RepresentingGraph build_representing_graph(const UGraph& g, const BuildLimits& limits = {});

struct MarkovReport {
  bool ok = true;
  std::vector<std::string> failures;
  // known-switch count -> number of state nodes in that layer
  std::map<std::size_t, std::size_t> layers;
};

// Structural checks: probability rows sum to 1 (1e-12), nature branches
// strictly refine knowledge, terminals carry no actions, Active states have
// actions with positive cost, action arcs only target terminals or natures,
// and the graph is acyclic.
MarkovReport check_markov(const RepresentingGraph& rg);

struct GraphStats {
  std::size_t states = 0;
  std::size_t natures = 0;
  std::size_t arcs = 0;
  std::size_t layers = 0;
};

GraphStats graph_stats(const RepresentingGraph& rg);
// key=value lines: states=, natures=, arcs=, layers=
void write_stats(std::ostream& os, const GraphStats& stats);

// Graphviz rendering. With a policy, only chosen arcs and the nodes they
// reach are drawn. Throws PreconditionError on a policy/graph mismatch.
std::string to_dot(const RepresentingGraph& rg, const Policy* policy = nullptr);

}  // namespace uplan
