#include "uplan/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <queue>
#include <utility>

namespace uplan {

namespace {

using QueueEntry = std::pair<double, VertexId>;
using MinQueue = std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>>;

// Dijkstra from root; stops early once stop_at is settled.
std::vector<double> dijkstra(const UGraph& g, const KnowledgeState& k, ViewMode mode,
                             VertexId root, std::optional<VertexId> stop_at) {
  std::vector<double> dist(g.vertex_count(), kUnreachable);
  std::vector<bool> done(g.vertex_count(), false);
  MinQueue queue;
  dist[root] = 0.0;
  queue.emplace(0.0, root);
  while (!queue.empty()) {
    auto [d, u] = queue.top();
    queue.pop();
    if (done[u]) continue;
    done[u] = true;
    if (stop_at && u == *stop_at) break;
    for (ConnectionId c : g.incident(u)) {
      if (!in_view(g, k, c, mode)) continue;
      const Connection& conn = g.connection(c);
      const VertexId v = conn.other(u);
      const double nd = d + conn.weight;
      if (nd < dist[v]) {
        dist[v] = nd;
        queue.emplace(nd, v);
      }
    }
  }
  return dist;
}

}  // namespace

std::size_t KnowledgeState::known_count() const {
  return static_cast<std::size_t>(
      std::count_if(status_.begin(), status_.end(), [](SwitchStatus s) { return s != SwitchStatus::kUnknown; }));
}

bool KnowledgeState::refined_by(const KnowledgeState& other) const {
  if (other.size() != size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (status_[i] != SwitchStatus::kUnknown && status_[i] != other.status_[i]) return false;
  }
  return true;
}

std::string to_string(ConfigClass::Kind kind) {
  switch (kind) {
    case ConfigClass::Kind::kGoodTerminal: return "GoodTerminal";
    case ConfigClass::Kind::kBadTerminal: return "BadTerminal";
    case ConfigClass::Kind::kUncontrolled: return "Uncontrolled";
    case ConfigClass::Kind::kActive: return "Active";
  }
  return "?";
}

std::string to_string(const ConfigClass& c) {
  if (c.kind != ConfigClass::Kind::kGoodTerminal) return to_string(c.kind);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "GoodTerminal(%.12g)", c.remaining);
  return buf;
}

bool in_view(const UGraph& g, const KnowledgeState& k, ConnectionId c, ViewMode mode) {
  const Connection& conn = g.connection(c);
  if (!conn.is_switch()) return true;
  switch (k[conn.switch_index]) {
    case SwitchStatus::kOn: return true;
    case SwitchStatus::kOff: return false;
    case SwitchStatus::kUnknown: return mode == ViewMode::kOptimistic;
  }
  return false;
}

std::vector<ConnectionId> induced_view(const UGraph& g, const KnowledgeState& k, ViewMode mode) {
  std::vector<ConnectionId> view;
  for (ConnectionId c = 0; c < g.connections().size(); ++c) {
    if (in_view(g, k, c, mode)) view.push_back(c);
  }
  return view;
}

std::vector<double> distances_from(const UGraph& g, const KnowledgeState& k, ViewMode mode,
                                   VertexId src) {
  return dijkstra(g, k, mode, src, std::nullopt);
}

std::optional<double> shortest_distance(const UGraph& g, const KnowledgeState& k, ViewMode mode,
                                        VertexId src, VertexId dst) {
  const double d = dijkstra(g, k, mode, dst, src)[src];
  if (d == kUnreachable) return std::nullopt;
  return d;
}

bool terminal_equal(double optimistic, double pessimistic) {
  if (pessimistic == kUnreachable) return false;
  return std::abs(optimistic - pessimistic) <= 1e-12 * std::max(1.0, pessimistic);
}

namespace {

ConfigClass classify_from(double optimistic, double pessimistic, bool unknown_incident) {
  if (optimistic == kUnreachable) return ConfigClass::bad();
  if (terminal_equal(optimistic, pessimistic)) return ConfigClass::good(pessimistic);
  if (unknown_incident) return ConfigClass::uncontrolled();
  return ConfigClass::active();
}

bool unknown_incident(const UGraph& g, const KnowledgeState& k, VertexId v) {
  for (ConnectionId c : g.incident(v)) {
    const Connection& conn = g.connection(c);
    if (conn.is_switch() && k[conn.switch_index] == SwitchStatus::kUnknown) return true;
  }
  return false;
}

}  // namespace

ConfigClass classify(const Configuration& c) {
  const UGraph& g = *c.graph;
  const double o = shortest_distance(g, c.knowledge, ViewMode::kOptimistic, c.current, c.goal)
                       .value_or(kUnreachable);
  const double p = shortest_distance(g, c.knowledge, ViewMode::kPessimistic, c.current, c.goal)
                       .value_or(kUnreachable);
  return classify_from(o, p, unknown_incident(g, c.knowledge, c.current));
}

CurrentConnections current_connections(const Configuration& c) {
  CurrentConnections out;
  for (ConnectionId id : c.graph->incident(c.current)) {
    const Connection& conn = c.graph->connection(id);
    if (in_view(*c.graph, c.knowledge, id, ViewMode::kPessimistic)) {
      out.edges.push_back(id);
    } else if (conn.is_switch() && c.knowledge[conn.switch_index] == SwitchStatus::kUnknown) {
      out.switches.push_back(id);
    }
  }
  return out;
}

KnowledgeAnalysis::KnowledgeAnalysis(const UGraph& g, KnowledgeState k, VertexId goal)
    : graph_(&g),
      knowledge_(std::move(k)),
      goal_(goal),
      optimistic_(distances_from(g, knowledge_, ViewMode::kOptimistic, goal)),
      pessimistic_(distances_from(g, knowledge_, ViewMode::kPessimistic, goal)) {}

bool KnowledgeAnalysis::has_unknown_incident(VertexId v) const {
  return unknown_incident(*graph_, knowledge_, v);
}

ConfigClass KnowledgeAnalysis::classify(VertexId v) const {
  return classify_from(optimistic_[v], pessimistic_[v], has_unknown_incident(v));
}

}  // namespace uplan
