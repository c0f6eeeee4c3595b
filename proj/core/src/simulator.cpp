#include "uplan/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "uplan/error.hpp"

namespace uplan {

namespace {

// Shortest path from c.current to c.goal in the view, as connection ids.
std::optional<std::vector<ConnectionId>> shortest_path(const Configuration& c, ViewMode mode) {
  const UGraph& g = *c.graph;
  constexpr ConnectionId kNone = std::numeric_limits<ConnectionId>::max();
  using Entry = std::pair<double, VertexId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  std::vector<double> dist(g.vertex_count(), kUnreachable);
  std::vector<ConnectionId> via(g.vertex_count(), kNone);
  std::vector<bool> done(g.vertex_count(), false);
  dist[c.current] = 0.0;
  queue.emplace(0.0, c.current);
  while (!queue.empty()) {
    auto [d, u] = queue.top();
    queue.pop();
    if (done[u]) continue;
    done[u] = true;
    if (u == c.goal) break;
    for (ConnectionId id : g.incident(u)) {
      if (!in_view(g, c.knowledge, id, mode)) continue;
      const Connection& conn = g.connection(id);
      const VertexId v = conn.other(u);
      if (d + conn.weight < dist[v]) {
        dist[v] = d + conn.weight;
        via[v] = id;
        queue.emplace(dist[v], v);
      }
    }
  }
  if (dist[c.goal] == kUnreachable) return std::nullopt;
  std::vector<ConnectionId> path;
  for (VertexId x = c.goal; x != c.current;) {
    path.push_back(via[x]);
    x = g.connection(via[x]).other(x);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

Decision terminal_decision(const ConfigClass& cls) {
  if (cls.kind == ConfigClass::Kind::kGoodTerminal) return FinishDecision{cls.remaining};
  return HaltDecision{};
}

// Prefix of path up to the first vertex that is not Active.
MoveDecision move_along(const Configuration& c, const KnowledgeAnalysis& a,
                        const std::vector<ConnectionId>& path) {
  const UGraph& g = *c.graph;
  MoveDecision move;
  VertexId at = c.current;
  for (ConnectionId id : path) {
    if (!in_view(g, c.knowledge, id, ViewMode::kPessimistic)) {
      throw std::logic_error("baseline walk reached an unknown switch without stopping");
    }
    move.waypoints.push_back(id);
    at = g.connection(id).other(at);
    if (a.classify(at).kind != ConfigClass::Kind::kActive) break;
  }
  move.to = at;
  return move;
}

Decision replan(const Configuration& c, bool prefer_certain) {
  const KnowledgeAnalysis a(*c.graph, c.knowledge, c.goal);
  const ConfigClass cls = a.classify(c.current);
  if (cls.is_terminal()) return terminal_decision(cls);
  if (prefer_certain) {
    if (auto path = shortest_path(c, ViewMode::kPessimistic)) return move_along(c, a, *path);
  }
  auto path = shortest_path(c, ViewMode::kOptimistic);
  if (!path) throw std::logic_error("Active configuration without an optimistic path");
  return move_along(c, a, *path);
}

}  // namespace

std::string to_json(const TrialStats& stats) {
  nlohmann::ordered_json j;
  j["runs"] = stats.runs;
  j["mean_cost"] = stats.mean_cost;
  j["stderr"] = stats.stderr_cost;
  j["reach_fraction"] = stats.reach_fraction;
  j["min_cost"] = stats.min_cost;
  j["max_cost"] = stats.max_cost;
  return j.dump();
}

OptimalPolicyStrategy::OptimalPolicyStrategy(const UGraph& g, PolicyDocument policy)
    : graph_(&g), policy_(std::move(policy)) {
  if (policy_.instance_digest != instance_digest(g)) {
    throw PreconditionError("policy digest does not match the instance");
  }
}

Decision OptimalPolicyStrategy::decide(const Configuration& c) const {
  const std::string key = canonical_key(c);
  const auto it = policy_.states.find(key);
  if (it == policy_.states.end()) throw PreconditionError("policy has no entry for state " + key);
  const PolicyAction& action = it->second.action;
  switch (action.type) {
    case PolicyAction::Type::kFinish: return FinishDecision{action.cost};
    case PolicyAction::Type::kHalt: return HaltDecision{};
    case PolicyAction::Type::kMove: break;
  }
  MoveDecision move;
  for (const std::string& id : action.waypoints) {
    const auto conn = graph_->find_connection(id);
    if (!conn) throw PreconditionError("policy names unknown connection '" + id + "'");
    move.waypoints.push_back(*conn);
  }
  const auto to = graph_->find_vertex(action.to);
  if (!to) throw PreconditionError("policy names unknown vertex '" + action.to + "'");
  move.to = *to;
  return move;
}

Decision OptimisticReplanner::decide(const Configuration& c) const { return replan(c, false); }

Decision PessimisticDirect::decide(const Configuration& c) const { return replan(c, true); }

World sample_world(const UGraph& g, SplitMix64& rng) {
  World w;
  w.on.resize(g.switch_count());
  for (std::size_t j = 0; j < g.switch_count(); ++j) {
    const double p = g.connection(g.switch_connection(j)).prob;
    w.on[j] = rng.uniform() < p;
    w.probability *= w.on[j] ? p : 1.0 - p;
  }
  return w;
}

RunResult run_strategy(const UGraph& g, const Strategy& s, const World& w) {
  Configuration config = Configuration::initial(g);
  double cost = 0.0;

  std::size_t max_moves = g.vertex_count();
  for (std::size_t j = 0; j < g.switch_count() && max_moves < (std::size_t{1} << 40); ++j) max_moves *= 3;

  for (std::size_t moves = 0;;) {
    const KnowledgeAnalysis a(g, config.knowledge, config.goal);
    const ConfigClass cls = a.classify(config.current);
    if (cls.kind == ConfigClass::Kind::kUncontrolled) {
      for (ConnectionId id : current_connections(config).switches) {
        const std::size_t j = g.connection(id).switch_index;
        config.knowledge.set(j, w.on[j] ? SwitchStatus::kOn : SwitchStatus::kOff);
      }
      continue;
    }
    const Decision d = s.decide(config);
    if (cls.kind == ConfigClass::Kind::kGoodTerminal) {
      const auto* finish = std::get_if<FinishDecision>(&d);
      if (finish == nullptr) throw PreconditionError(s.name() + ": did not finish at a good terminal");
      return {cost + finish->cost, Outcome::kReachedGoal};
    }
    if (cls.kind == ConfigClass::Kind::kBadTerminal) {
      if (!std::holds_alternative<HaltDecision>(d)) {
        throw PreconditionError(s.name() + ": did not halt at a bad terminal");
      }
      return {cost, Outcome::kProvedUnreachable};
    }
    const auto* move = std::get_if<MoveDecision>(&d);
    if (move == nullptr || move->waypoints.empty()) {
      throw PreconditionError(s.name() + ": stopped at a non-terminal configuration");
    }
    if (++moves > max_moves) throw PreconditionError(s.name() + ": did not terminate");
    VertexId at = config.current;
    double walk = 0.0;
    for (std::size_t i = 0; i < move->waypoints.size(); ++i) {
      const ConnectionId id = move->waypoints[i];
      if (i > 0 && a.classify(at).kind != ConfigClass::Kind::kActive) {
        throw PreconditionError(s.name() + ": walk continues past '" + g.vertex_name(at) + "'");
      }
      if (id >= g.connections().size() || !g.connection(id).touches(at) ||
          !in_view(g, config.knowledge, id, ViewMode::kPessimistic)) {
        throw PreconditionError(s.name() + ": illegal waypoint at '" + g.vertex_name(at) + "'");
      }
      walk += g.connection(id).weight;
      at = g.connection(id).other(at);
    }
    if (at != move->to) throw PreconditionError(s.name() + ": walk does not end where announced");
    cost += walk;
    config.current = at;
  }
}

TrialStats monte_carlo(const UGraph& g, const Strategy& s, std::size_t runs, std::uint64_t seed,
                       unsigned threads) {
  if (runs == 0) throw PreconditionError("monte_carlo: runs must be at least 1");
  std::vector<RunResult> results(runs);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      SplitMix64 rng = SplitMix64::substream(seed, i);
      results[i] = run_strategy(g, s, sample_world(g, rng));
    }
  };
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::size_t>(runs, 256))));
  if (threads == 1) {
    work(0, runs);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    const std::size_t chunk = (runs + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = std::min(runs, t * chunk);
      const std::size_t end = std::min(runs, begin + chunk);
      pool.emplace_back([&, t, begin, end] {
        try {
          work(begin, end);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  TrialStats stats;
  stats.runs = runs;
  stats.min_cost = results[0].cost;
  stats.max_cost = results[0].cost;
  double sum = 0.0;
  std::size_t reached = 0;
  for (const RunResult& r : results) {
    sum += r.cost;
    reached += r.outcome == Outcome::kReachedGoal;
    stats.min_cost = std::min(stats.min_cost, r.cost);
    stats.max_cost = std::max(stats.max_cost, r.cost);
  }
  stats.mean_cost = sum / static_cast<double>(runs);
  stats.reach_fraction = static_cast<double>(reached) / static_cast<double>(runs);
  if (runs == 1) {
    stats.degenerate = true;
  } else {
    double sq = 0.0;
    for (const RunResult& r : results) sq += (r.cost - stats.mean_cost) * (r.cost - stats.mean_cost);
    stats.stderr_cost = std::sqrt(sq / static_cast<double>(runs - 1) / static_cast<double>(runs));
  }
  return stats;
}

PolicyValue evaluate_strategy_exact(const UGraph& g, const Strategy& s, std::size_t cap) {
  PolicyValue value;
  for (const World& w : enumerate_worlds(g, cap)) {
    if (w.probability == 0.0) continue;
    const RunResult r = run_strategy(g, s, w);
    value.expected_cost += w.probability * r.cost;
    if (r.outcome == Outcome::kReachedGoal) value.reach_probability += w.probability;
  }
  return value;
}

}  // namespace uplan
