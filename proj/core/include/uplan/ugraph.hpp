#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace uplan {

using VertexId = std::size_t;
using ConnectionId = std::size_t;  // index into UGraph::connections()

enum class ConnectionKind { kEdge, kSwitch };

struct Connection {
  std::string id;
  VertexId u = 0;
  VertexId v = 0;
  double weight = 0.0;
  ConnectionKind kind = ConnectionKind::kEdge;
  // Presence probability; 1 for certain edges.
  double prob = 1.0;
  // Position among the switches (declaration order); unset for edges.
  std::size_t switch_index = 0;

  bool is_switch() const { return kind == ConnectionKind::kSwitch; }
  VertexId other(VertexId x) const { return x == u ? v : u; }
  bool touches(VertexId x) const { return x == u || x == v; }
};

// Raw, unvalidated description of an instance as it appears in a document.
struct UGraphSpec {
  struct Link {
    std::string id;
    std::string a;
    std::string b;
    double weight = 0.0;
    double prob = 1.0;
  };
  std::vector<std::string> vertices;
  std::vector<Link> edges;
  std::vector<Link> switches;
  std::string start;
  std::string goal;
};

// Immutable uncertain environment: certain edges plus probabilistic switches.
// Connections are stored edges first, then switches, each in declaration
// order. Connections are undirected.
class UGraph {
 public:
  // Validates every invariant and throws ValidationError listing all
  // violations at once.
  static UGraph create(const UGraphSpec& spec);

  std::size_t vertex_count() const { return vertices_.size(); }
  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::string& vertex_name(VertexId v) const { return vertices_[v]; }
  std::optional<VertexId> find_vertex(std::string_view name) const;

  const std::vector<Connection>& connections() const { return connections_; }
  const Connection& connection(ConnectionId c) const { return connections_[c]; }
  std::optional<ConnectionId> find_connection(std::string_view id) const;

  std::size_t edge_count() const { return edge_count_; }
  std::size_t switch_count() const { return connections_.size() - edge_count_; }
  // Connection index of the i-th switch.
  ConnectionId switch_connection(std::size_t i) const { return edge_count_ + i; }

  // Incident connections of v, ascending connection index.
  const std::vector<ConnectionId>& incident(VertexId v) const { return incident_[v]; }

  VertexId start() const { return start_; }
  VertexId goal() const { return goal_; }

  UGraphSpec to_spec() const;
  // Copy with every weight multiplied by factor (> 0).
  UGraph scaled(double factor) const;
  // Copy with a different presence probability on switch i.
  UGraph with_switch_prob(std::size_t i, double prob) const;

 private:
  std::vector<std::string> vertices_;
  std::vector<Connection> connections_;
  std::vector<std::vector<ConnectionId>> incident_;
  std::size_t edge_count_ = 0;
  VertexId start_ = 0;
  VertexId goal_ = 0;
};

// Instance document (JSON) <-> UGraph.
UGraph load_ugraph(std::string_view text);
UGraphSpec parse_instance(std::string_view text);
// Canonical serialization: fixed key order, compact unless indent >= 0.
std::string serialize_ugraph(const UGraph& g, int indent = -1);
// 64-bit FNV-1a over the compact canonical serialization, 16 hex digits.
std::string instance_digest(const UGraph& g);
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace uplan
