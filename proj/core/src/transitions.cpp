#include "uplan/transitions.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <utility>

#include "uplan/error.hpp"

namespace uplan {

namespace {

constexpr ConnectionId kNoConnection = std::numeric_limits<ConnectionId>::max();

}  // namespace

std::vector<GenericTransition> generic_successors(const Configuration& c) {
  const KnowledgeAnalysis analysis(*c.graph, c.knowledge, c.goal);
  return generic_successors(c, analysis);
}

std::vector<GenericTransition> generic_successors(const Configuration& c,
                                                  const KnowledgeAnalysis& analysis) {
  const UGraph& g = *c.graph;
  if (analysis.classify(c.current).kind != ConfigClass::Kind::kActive) {
    throw PreconditionError("generic_successors: configuration at '" + g.vertex_name(c.current) +
                            "' is not Active");
  }

  using Entry = std::pair<double, VertexId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  std::vector<double> dist(g.vertex_count(), kUnreachable);
  std::vector<ConnectionId> via(g.vertex_count(), kNoConnection);
  std::vector<bool> done(g.vertex_count(), false);
  std::vector<GenericTransition> out;

  dist[c.current] = 0.0;
  queue.emplace(0.0, c.current);
  while (!queue.empty()) {
    auto [d, u] = queue.top();
    queue.pop();
    if (done[u]) continue;
    done[u] = true;
    if (u != c.current) {
      const ConfigClass cls = analysis.classify(u);
      if (cls.kind == ConfigClass::Kind::kBadTerminal) {
        // Same certain component as an Active source, so the goal is
        // optimistically reachable from u as well.
        throw std::logic_error("generic_successors: bad terminal reachable from an Active source");
      }
      if (cls.kind != ConfigClass::Kind::kActive) {
        GenericTransition t;
        t.successor = c.at(u);
        t.cost = d;
        t.successor_class = cls;
        for (VertexId x = u; x != c.current;) {
          t.waypoints.push_back(via[x]);
          x = g.connection(via[x]).other(x);
        }
        std::reverse(t.waypoints.begin(), t.waypoints.end());
        out.push_back(std::move(t));
        continue;
      }
    }
    for (ConnectionId id : g.incident(u)) {
      if (!in_view(g, c.knowledge, id, ViewMode::kPessimistic)) continue;
      const Connection& conn = g.connection(id);
      const VertexId v = conn.other(u);
      const double nd = d + conn.weight;
      if (nd < dist[v]) {
        dist[v] = nd;
        via[v] = id;
        queue.emplace(nd, v);
      }
    }
  }
  if (out.empty()) {
    throw std::logic_error("generic_successors: Active configuration without successors");
  }
  return out;
}

Configuration apply_generic(const Configuration& c, const GenericTransition& t) {
  const UGraph& g = *c.graph;
  if (t.successor.graph != c.graph || !(t.successor.knowledge == c.knowledge) ||
      t.successor.goal != c.goal || t.waypoints.empty()) {
    throw PreconditionError("apply_generic: transition does not belong to this configuration");
  }
  VertexId at = c.current;
  for (ConnectionId id : t.waypoints) {
    if (id >= g.connections().size() || !g.connection(id).touches(at) ||
        !in_view(g, c.knowledge, id, ViewMode::kPessimistic)) {
      throw PreconditionError("apply_generic: waypoints do not form a walk from the current vertex");
    }
    at = g.connection(id).other(at);
  }
  if (at != t.successor.current) {
    throw PreconditionError("apply_generic: walk does not end at the successor vertex");
  }
  return t.successor;
}

std::vector<NatureOutcome> nature_outcomes(const Configuration& c, std::size_t max_revealed) {
  const UGraph& g = *c.graph;
  std::vector<ConnectionId> revealed = current_connections(c).switches;
  if (revealed.empty()) {
    throw PreconditionError("nature_outcomes: no unknown switch at '" + g.vertex_name(c.current) + "'");
  }
  if (revealed.size() > max_revealed) {
    throw LimitError("nature_outcomes: " + std::to_string(revealed.size()) +
                     " incident unknown switches exceed the revelation cap of " +
                     std::to_string(max_revealed));
  }

  const std::size_t k = revealed.size();
  std::vector<NatureOutcome> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    NatureOutcome o;
    o.probability = 1.0;
    o.result = c;
    for (std::size_t j = 0; j < k; ++j) {
      const Connection& s = g.connection(revealed[j]);
      const bool off = (mask >> (k - 1 - j)) & 1U;
      if (off) {
        o.probability *= 1.0 - s.prob;
        o.off_set.push_back(revealed[j]);
        o.result.knowledge.set(s.switch_index, SwitchStatus::kOff);
      } else {
        o.probability *= s.prob;
        o.on_set.push_back(revealed[j]);
        o.result.knowledge.set(s.switch_index, SwitchStatus::kOn);
      }
    }
    if (o.probability > 0.0) out.push_back(std::move(o));
  }
  return out;
}

}  // namespace uplan
