#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "uplan/oracle.hpp"
#include "uplan/random.hpp"

namespace uplan {

struct TrialStats {
  std::size_t runs = 0;
  double mean_cost = 0.0;
  double stderr_cost = 0.0;  // sample standard deviation / sqrt(runs)
  double reach_fraction = 0.0;
  double min_cost = 0.0;
  double max_cost = 0.0;
  // A single run has no spread; stderr is reported as 0.
  bool degenerate = false;

  bool operator==(const TrialStats&) const = default;
};

// {"runs":..,"mean_cost":..,"stderr":..,"reach_fraction":..,"min_cost":..,"max_cost":..}
std::string to_json(const TrialStats& stats);

struct MoveDecision {
  std::vector<ConnectionId> waypoints;
  VertexId to = 0;
};
struct FinishDecision {
  double cost = 0.0;
};
struct HaltDecision {};
using Decision = std::variant<MoveDecision, FinishDecision, HaltDecision>;

// Decides at controlled configurations only; revelations are applied by the
// runner. Must finish at good terminals and halt at bad ones.
class Strategy {
 public:
  virtual ~Strategy() = default;
  virtual std::string name() const = 0;
  virtual Decision decide(const Configuration& c) const = 0;
};

// Follows a policy document.
class OptimalPolicyStrategy : public Strategy {
 public:
  OptimalPolicyStrategy(const UGraph& g, PolicyDocument policy);
  std::string name() const override { return "optimal"; }
  Decision decide(const Configuration& c) const override;

 private:
  const UGraph* graph_;
  PolicyDocument policy_;
};

// Walks the optimistic shortest path, stopping at the first vertex where
// something is revealed or a terminal is reached, then re-plans.
class OptimisticReplanner : public Strategy {
 public:
  std::string name() const override { return "optimistic"; }
  Decision decide(const Configuration& c) const override;
};

// Walks the certain shortest path when one exists; otherwise explores like
// the optimistic replanner.
class PessimisticDirect : public Strategy {
 public:
  std::string name() const override { return "pessimistic"; }
  Decision decide(const Configuration& c) const override;
};

// Each switch on with its probability, drawn in declaration order.
World sample_world(const UGraph& g, SplitMix64& rng);

// Throws PreconditionError when the strategy misbehaves (illegal move, wrong
// stopping decision, or more than |V| * 3^k moves).
RunResult run_strategy(const UGraph& g, const Strategy& s, const World& w);

// Run i draws its world from SplitMix64::substream(seed, i); statistics are
// reduced in run order, so any thread count gives identical results.
TrialStats monte_carlo(const UGraph& g, const Strategy& s, std::size_t runs, std::uint64_t seed,
                       unsigned threads = 1);

PolicyValue evaluate_strategy_exact(const UGraph& g, const Strategy& s,
                                    std::size_t cap = kMaxEnumeratedSwitches);

}  // namespace uplan
