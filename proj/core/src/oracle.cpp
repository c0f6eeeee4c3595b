#include "uplan/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uplan/error.hpp"

namespace uplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_cap(const UGraph& g, std::size_t cap, const char* what) {
  if (g.switch_count() > cap) {
    throw LimitError(std::string(what) + ": " + std::to_string(g.switch_count()) +
                     " switches exceed the cap of " + std::to_string(cap));
  }
}

}  // namespace

std::vector<World> enumerate_worlds(const UGraph& g, std::size_t cap) {
  check_cap(g, cap, "enumerate_worlds");
  const std::size_t k = g.switch_count();
  std::vector<World> worlds;
  worlds.reserve(std::size_t{1} << k);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    World w;
    w.on.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
      const bool off = (mask >> (k - 1 - j)) & 1U;
      const double p = g.connection(g.switch_connection(j)).prob;
      w.on[j] = !off;
      w.probability *= off ? 1.0 - p : p;
    }
    worlds.push_back(std::move(w));
  }
  return worlds;
}

RunResult run_in_world(const UGraph& g, const PolicyDocument& policy, const World& world) {
  Configuration config = Configuration::initial(g);
  double cost = 0.0;
  auto unknown_at = [&](VertexId v) {
    std::vector<std::size_t> out;
    for (ConnectionId c : g.incident(v)) {
      const Connection& conn = g.connection(c);
      if (conn.is_switch() && config.knowledge[conn.switch_index] == SwitchStatus::kUnknown) {
        out.push_back(conn.switch_index);
      }
    }
    return out;
  };

  // Each move ends at a revelation or a terminal, so a sound policy needs at
  // most one move per switch plus the final one.
  const std::size_t max_steps = 2 * g.switch_count() + 4;
  for (std::size_t step = 0; step < max_steps; ++step) {
    const std::string key = canonical_key(config);
    const auto entry = policy.states.find(key);
    if (entry == policy.states.end()) {
      const auto unknown = unknown_at(config.current);
      if (unknown.empty()) throw PreconditionError("run_in_world: policy has no entry for state " + key);
      for (std::size_t s : unknown) {
        config.knowledge.set(s, world.on[s] ? SwitchStatus::kOn : SwitchStatus::kOff);
      }
      continue;
    }
    const PolicyAction& action = entry->second.action;
    switch (action.type) {
      case PolicyAction::Type::kFinish:
        return {cost + action.cost, Outcome::kReachedGoal};
      case PolicyAction::Type::kHalt:
        return {cost, Outcome::kProvedUnreachable};
      case PolicyAction::Type::kMove:
        break;
    }
    VertexId at = config.current;
    double walk = 0.0;
    for (std::size_t i = 0; i < action.waypoints.size(); ++i) {
      const auto id = g.find_connection(action.waypoints[i]);
      if (!id) throw PreconditionError("run_in_world: unknown waypoint '" + action.waypoints[i] + "'");
      const Connection& conn = g.connection(*id);
      const bool traversable =
          !conn.is_switch() || config.knowledge[conn.switch_index] == SwitchStatus::kOn;
      if (!conn.touches(at) || !traversable) {
        throw PreconditionError("run_in_world: waypoint '" + conn.id + "' is not traversable from '" +
                                g.vertex_name(at) + "' at state " + key);
      }
      if (i > 0 && !unknown_at(at).empty()) {
        throw PreconditionError("run_in_world: walk at state " + key + " passes an unrevealed switch at '" +
                                g.vertex_name(at) + "'");
      }
      walk += conn.weight;
      at = conn.other(at);
    }
    if (action.waypoints.empty() || g.vertex_name(at) != action.to) {
      throw PreconditionError("run_in_world: walk at state " + key + " does not end at '" + action.to + "'");
    }
    cost += walk;
    config.current = at;
  }
  throw PreconditionError("run_in_world: policy does not terminate");
}

PolicyValue exact_policy_value(const UGraph& g, const PolicyDocument& policy, std::size_t cap) {
  PolicyValue value;
  for (const World& w : enumerate_worlds(g, cap)) {
    if (w.probability == 0.0) continue;
    const RunResult r = run_in_world(g, policy, w);
    value.expected_cost += w.probability * r.cost;
    if (r.outcome == Outcome::kReachedGoal) value.reach_probability += w.probability;
  }
  return value;
}

double layered_expectimax_value(const UGraph& g, std::size_t cap) {
  check_cap(g, cap, "layered_expectimax_value");
  const std::size_t k = g.switch_count();
  const std::size_t n = g.vertex_count();
  const auto& conns = g.connections();

  std::vector<std::size_t> pow3(k + 1, 1);
  for (std::size_t j = 1; j <= k; ++j) pow3[j] = pow3[j - 1] * 3;
  const std::size_t n_know = pow3[k];
  // digit 0 unknown, 1 on, 2 off
  auto digit = [&](std::size_t idx, std::size_t j) { return (idx / pow3[j]) % 3; };

  std::vector<std::vector<std::size_t>> by_known(k + 1);
  for (std::size_t idx = 0; idx < n_know; ++idx) {
    std::size_t known = 0;
    for (std::size_t j = 0; j < k; ++j) known += digit(idx, j) != 0;
    by_known[known].push_back(idx);
  }

  std::vector<double> value(n_know * n, kInf);
  enum class Kind { kBad, kGood, kUncontrolled, kActive };

  for (std::size_t layer = k + 1; layer-- > 0;) {
    for (std::size_t idx : by_known[layer]) {
      auto usable = [&](const Connection& c, bool optimistic) {
        if (!c.is_switch()) return true;
        const std::size_t d = digit(idx, c.switch_index);
        return d == 1 || (d == 0 && optimistic);
      };
      // Bellman-Ford distances to the goal.
      auto to_goal = [&](bool optimistic) {
        std::vector<double> dist(n, kInf);
        dist[g.goal()] = 0.0;
        for (std::size_t round = 0; round + 1 < std::max<std::size_t>(n, 2); ++round) {
          bool changed = false;
          for (const Connection& c : conns) {
            if (!usable(c, optimistic)) continue;
            if (dist[c.v] + c.weight < dist[c.u]) dist[c.u] = dist[c.v] + c.weight, changed = true;
            if (dist[c.u] + c.weight < dist[c.v]) dist[c.v] = dist[c.u] + c.weight, changed = true;
          }
          if (!changed) break;
        }
        return dist;
      };
      const std::vector<double> opt = to_goal(true);
      const std::vector<double> pes = to_goal(false);

      std::vector<Kind> kind(n);
      std::vector<double> label(n, kInf);
      for (VertexId v = 0; v < n; ++v) {
        std::vector<std::size_t> unknown;
        for (ConnectionId c : g.incident(v)) {
          const Connection& conn = conns[c];
          if (conn.is_switch() && digit(idx, conn.switch_index) == 0) unknown.push_back(conn.switch_index);
        }
        if (opt[v] == kInf) {
          kind[v] = Kind::kBad;
          label[v] = 0.0;
        } else if (pes[v] != kInf && std::abs(opt[v] - pes[v]) <= 1e-12 * std::max(1.0, pes[v])) {
          kind[v] = Kind::kGood;
          label[v] = pes[v];
        } else if (!unknown.empty()) {
          kind[v] = Kind::kUncontrolled;
          double expectation = 0.0;
          const std::size_t m = unknown.size();
          for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
            double p = 1.0;
            std::size_t next = idx;
            for (std::size_t j = 0; j < m; ++j) {
              const double on_prob = conns[g.switch_connection(unknown[j])].prob;
              if ((mask >> j) & 1U) {
                p *= 1.0 - on_prob;
                next += 2 * pow3[unknown[j]];
              } else {
                p *= on_prob;
                next += pow3[unknown[j]];
              }
            }
            if (p > 0.0) expectation += p * value[next * n + v];
          }
          label[v] = expectation;
        } else {
          kind[v] = Kind::kActive;
        }
      }

      // Cheapest certain walk to a stopping point: uncontrolled vertices are
      // stopping points only, good terminals may also be walked through.
      for (std::size_t round = 0; round <= n; ++round) {
        bool changed = false;
        for (const Connection& c : conns) {
          if (!usable(c, false)) continue;
          for (int dir = 0; dir < 2; ++dir) {
            const VertexId from = dir == 0 ? c.u : c.v;
            const VertexId to = dir == 0 ? c.v : c.u;
            if (kind[to] == Kind::kBad || label[to] == kInf) continue;
            if (kind[from] != Kind::kActive && kind[from] != Kind::kGood) continue;
            if (c.weight + label[to] < label[from]) {
              label[from] = c.weight + label[to];
              changed = true;
            }
          }
        }
        if (!changed) break;
      }
      std::copy(label.begin(), label.end(), value.begin() + static_cast<std::ptrdiff_t>(idx * n));
    }
  }
  return value[g.start()];
}

}  // namespace uplan
