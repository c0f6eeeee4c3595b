#pragma once

#include <cstddef>
#include <vector>

#include "uplan/model.hpp"

namespace uplan {

// Cheapest walk through controlled territory from a configuration to the
// first vertex that is a terminal or an uncontrolled configuration.
struct GenericTransition {
  Configuration successor;
  std::vector<ConnectionId> waypoints;  // in walk order
  double cost = 0.0;                    // sum of waypoint weights, walk order
  ConfigClass successor_class;
};

// One joint revelation of the switches incident to an uncontrolled vertex.
struct NatureOutcome {
  std::vector<ConnectionId> on_set;
  std::vector<ConnectionId> off_set;
  double probability = 0.0;
  Configuration result;
};

inline constexpr std::size_t kDefaultMaxRevealed = 20;

// All generic successors of an Active configuration, ascending
// (cost, vertex index). Walks expand only through Active vertices; good
// terminals and uncontrolled vertices are recorded but not expanded.
// Throws PreconditionError when c is not Active.
std::vector<GenericTransition> generic_successors(const Configuration& c);
std::vector<GenericTransition> generic_successors(const Configuration& c,
                                                  const KnowledgeAnalysis& analysis);

// Throws PreconditionError when t was not produced for c.
Configuration apply_generic(const Configuration& c, const GenericTransition& t);

// Every on/off assignment to CS(c) with nonzero probability. Order: switches
// in declaration order, On before Off, first switch most significant.
// Throws PreconditionError when CS(c) is empty and LimitError when
// |CS(c)| > max_revealed.
std::vector<NatureOutcome> nature_outcomes(const Configuration& c,
                                           std::size_t max_revealed = kDefaultMaxRevealed);

}  // namespace uplan
