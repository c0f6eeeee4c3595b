#pragma once

#include <cstddef>
#include <vector>

#include "uplan/policy_document.hpp"

namespace uplan {

// One joint realization of every switch.
struct World {
  std::vector<bool> on;  // switch declaration order
  double probability = 1.0;
};

enum class Outcome { kReachedGoal, kProvedUnreachable };

struct RunResult {
  double cost = 0.0;
  Outcome outcome = Outcome::kProvedUnreachable;
};

struct PolicyValue {
  double expected_cost = 0.0;
  double reach_probability = 0.0;
};

inline constexpr std::size_t kMaxEnumeratedSwitches = 20;
inline constexpr std::size_t kMaxExpectimaxSwitches = 12;

// All 2^k worlds, binary counting over declaration order with the first
// switch most significant and On before Off. Throws LimitError above cap.
std::vector<World> enumerate_worlds(const UGraph& g, std::size_t cap = kMaxEnumeratedSwitches);

// Executes a policy document in a fixed world. A configuration whose key is
// in the document follows its action; any other configuration must stand on
// unknown switches, which are revealed from the world. Throws
// PreconditionError when the policy misses a visited state or a waypoint is
// not traversable.
RunResult run_in_world(const UGraph& g, const PolicyDocument& policy, const World& world);

// Probability-weighted aggregate of run_in_world over every world.
PolicyValue exact_policy_value(const UGraph& g, const PolicyDocument& policy,
                               std::size_t cap = kMaxEnumeratedSwitches);

// Optimal expected cost computed directly on the per-edge belief MDP: all 3^k
// knowledge vectors, deepest first, with Bellman-Ford distances and
// multi-target relaxation inside each knowledge layer. Shares no code with
// the representing-graph planner.
double layered_expectimax_value(const UGraph& g, std::size_t cap = kMaxExpectimaxSwitches);

}  // namespace uplan
