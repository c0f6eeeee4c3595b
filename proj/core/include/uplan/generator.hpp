#pragma once

#include <cstddef>
#include <cstdint>

#include "uplan/ugraph.hpp"

namespace uplan {

struct GeneratorParams {
  std::size_t vertices = 6;
  std::size_t extra_edges = 2;
  std::size_t switches = 2;
  // How many of the switches replace spanning-tree links (and may therefore
  // disconnect the goal). The rest join fresh vertex pairs.
  std::size_t tree_switches = 0;
  double weight_lo = 1.0;
  double weight_hi = 10.0;
  bool integer_weights = false;
  double prob_lo = 0.1;
  double prob_hi = 0.9;
  std::uint64_t seed = 1;
};

// Random spanning tree over a shuffled vertex order, then extra certain edges
// and switches on distinct unused pairs. Start and goal are the pair farthest
// apart along the tree. Byte-deterministic for a given parameter set; throws
// ValidationError for infeasible parameters.
UGraph generate_instance(const GeneratorParams& params);

}  // namespace uplan
