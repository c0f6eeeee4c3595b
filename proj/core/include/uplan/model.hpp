#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "uplan/ugraph.hpp"

namespace uplan {

enum class SwitchStatus : std::uint8_t { kUnknown = 0, kOn = 1, kOff = 2 };

// What the agent knows about each switch, in switch declaration order.
class KnowledgeState {
 public:
  KnowledgeState() = default;
  explicit KnowledgeState(std::size_t switches) : status_(switches, SwitchStatus::kUnknown) {}
  explicit KnowledgeState(std::vector<SwitchStatus> status) : status_(std::move(status)) {}

  static KnowledgeState all_unknown(const UGraph& g) { return KnowledgeState(g.switch_count()); }

  std::size_t size() const { return status_.size(); }
  SwitchStatus operator[](std::size_t i) const { return status_[i]; }
  const std::vector<SwitchStatus>& statuses() const { return status_; }

  void set(std::size_t i, SwitchStatus s) { status_[i] = s; }
  KnowledgeState with(std::size_t i, SwitchStatus s) const {
    KnowledgeState k = *this;
    k.set(i, s);
    return k;
  }

  std::size_t known_count() const;
  // True when every switch known here has the same status in other.
  bool refined_by(const KnowledgeState& other) const;

  friend bool operator==(const KnowledgeState&, const KnowledgeState&) = default;

 private:
  std::vector<SwitchStatus> status_;
};

// Where the agent is, where it is going, and what it knows. The graph must
// outlive the configuration.
struct Configuration {
  const UGraph* graph = nullptr;
  KnowledgeState knowledge;
  VertexId current = 0;
  VertexId goal = 0;

  static Configuration initial(const UGraph& g) {
    return {&g, KnowledgeState::all_unknown(g), g.start(), g.goal()};
  }
  Configuration at(VertexId v) const { return {graph, knowledge, v, goal}; }

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.graph == b.graph && a.current == b.current && a.goal == b.goal &&
           a.knowledge == b.knowledge;
  }
};

struct ConfigClass {
  enum class Kind { kGoodTerminal, kBadTerminal, kUncontrolled, kActive };
  Kind kind = Kind::kActive;
  // Pessimistic distance to the goal; meaningful for good terminals only.
  double remaining = 0.0;

  static ConfigClass good(double remaining) { return {Kind::kGoodTerminal, remaining}; }
  static ConfigClass bad() { return {Kind::kBadTerminal, 0.0}; }
  static ConfigClass uncontrolled() { return {Kind::kUncontrolled, 0.0}; }
  static ConfigClass active() { return {Kind::kActive, 0.0}; }

  bool is_terminal() const { return kind == Kind::kGoodTerminal || kind == Kind::kBadTerminal; }
  bool operator==(const ConfigClass&) const = default;
};

std::string to_string(ConfigClass::Kind kind);
std::string to_string(const ConfigClass& c);

enum class ViewMode { kPessimistic, kOptimistic };

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

// Whether connection c is traversable in the given view of k. Off switches
// are never in any view.
bool in_view(const UGraph& g, const KnowledgeState& k, ConnectionId c, ViewMode mode);

// Connection set of the induced view, ascending connection index.
std::vector<ConnectionId> induced_view(const UGraph& g, const KnowledgeState& k, ViewMode mode);

// Single-source distances in the view; kUnreachable where no path exists.
std::vector<double> distances_from(const UGraph& g, const KnowledgeState& k, ViewMode mode,
                                   VertexId src);

// Minimum path weight between src and dst, or nullopt when unreachable. The
// search is rooted at dst, so the value is bit-identical to
// distances_from(..., dst)[src].
std::optional<double> shortest_distance(const UGraph& g, const KnowledgeState& k, ViewMode mode,
                                        VertexId src, VertexId dst);

// Optimistic and pessimistic distances are "equal" for terminal purposes
// when |o - p| <= 1e-12 * max(1, p).
bool terminal_equal(double optimistic, double pessimistic);

ConfigClass classify(const Configuration& c);

struct CurrentConnections {
  std::vector<ConnectionId> edges;     // certain: edges and On switches
  std::vector<ConnectionId> switches;  // Unknown switches
};

CurrentConnections current_connections(const Configuration& c);

// Per-knowledge cache: distances to the goal in both views for every vertex,
// so each vertex classifies in O(degree).
class KnowledgeAnalysis {
 public:
  KnowledgeAnalysis(const UGraph& g, KnowledgeState k, VertexId goal);

  const UGraph& graph() const { return *graph_; }
  const KnowledgeState& knowledge() const { return knowledge_; }
  VertexId goal() const { return goal_; }

  double optimistic(VertexId v) const { return optimistic_[v]; }
  double pessimistic(VertexId v) const { return pessimistic_[v]; }
  bool has_unknown_incident(VertexId v) const;
  ConfigClass classify(VertexId v) const;

 private:
  const UGraph* graph_;
  KnowledgeState knowledge_;
  VertexId goal_;
  std::vector<double> optimistic_;
  std::vector<double> pessimistic_;
};

}  // namespace uplan
