#include "uplan/generator.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "uplan/error.hpp"
#include "uplan/random.hpp"

namespace uplan {

namespace {

using Pair = std::pair<std::size_t, std::size_t>;

Pair ordered(std::size_t a, std::size_t b) { return a < b ? Pair{a, b} : Pair{b, a}; }

void validate(const GeneratorParams& p) {
  std::vector<std::string> issues;
  if (p.vertices < 2) issues.push_back("vertices must be at least 2");
  if (!(p.weight_lo > 0.0 && p.weight_lo <= p.weight_hi && std::isfinite(p.weight_hi))) {
    issues.push_back("weight range must satisfy 0 < lo <= hi");
  } else if (p.integer_weights && std::ceil(p.weight_lo) > std::floor(p.weight_hi)) {
    issues.push_back("weight range contains no integer");
  }
  if (!(p.prob_lo > 0.0 && p.prob_lo <= p.prob_hi && p.prob_hi < 1.0)) {
    issues.push_back("prob range must satisfy 0 < lo <= hi < 1");
  }
  if (p.tree_switches > p.switches) issues.push_back("tree_switches exceeds switches");
  if (p.vertices >= 2) {
    const std::size_t tree = p.vertices - 1;
    const std::size_t pairs = p.vertices * (p.vertices - 1) / 2;
    if (p.tree_switches > tree) issues.push_back("tree_switches exceeds the number of tree links");
    const std::size_t fresh = p.extra_edges + (p.switches - std::min(p.switches, p.tree_switches));
    if (tree + fresh > pairs) {
      issues.push_back("requested " + std::to_string(tree + fresh) + " distinct pairs but only " +
                       std::to_string(pairs) + " exist");
    }
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

}  // namespace

UGraph generate_instance(const GeneratorParams& params) {
  validate(params);
  SplitMix64 rng(params.seed);
  const std::size_t n = params.vertices;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);

  std::vector<Pair> tree;
  std::set<Pair> used;
  for (std::size_t i = 1; i < n; ++i) {
    const Pair link = ordered(order[i], order[rng.below(i)]);
    tree.push_back(link);
    used.insert(link);
  }

  std::vector<std::size_t> tree_pick(tree.size());
  std::iota(tree_pick.begin(), tree_pick.end(), 0);
  for (std::size_t i = tree_pick.size(); i > 1; --i) std::swap(tree_pick[i - 1], tree_pick[rng.below(i)]);
  std::vector<bool> tree_is_switch(tree.size(), false);
  for (std::size_t i = 0; i < params.tree_switches; ++i) tree_is_switch[tree_pick[i]] = true;

  auto fresh_pair = [&] {
    for (;;) {
      const std::size_t a = rng.below(n);
      const std::size_t b = rng.below(n);
      if (a == b) continue;
      const Pair p = ordered(a, b);
      if (used.insert(p).second) return p;
    }
  };
  std::vector<Pair> extra;
  for (std::size_t i = 0; i < params.extra_edges; ++i) extra.push_back(fresh_pair());
  std::vector<Pair> switch_pairs;
  for (std::size_t i = params.tree_switches; i < params.switches; ++i) switch_pairs.push_back(fresh_pair());

  auto draw_weight = [&] {
    if (params.integer_weights) {
      const auto lo = static_cast<std::uint64_t>(std::ceil(params.weight_lo));
      const auto hi = static_cast<std::uint64_t>(std::floor(params.weight_hi));
      return static_cast<double>(lo + rng.below(hi - lo + 1));
    }
    return params.weight_lo + (params.weight_hi - params.weight_lo) * rng.uniform();
  };
  auto draw_prob = [&] { return params.prob_lo + (params.prob_hi - params.prob_lo) * rng.uniform(); };

  std::vector<double> tree_weight(tree.size());
  for (double& w : tree_weight) w = draw_weight();

  UGraphSpec spec;
  for (std::size_t v = 0; v < n; ++v) spec.vertices.push_back("v" + std::to_string(v));
  auto name = [&](std::size_t v) { return spec.vertices[v]; };
  for (std::size_t i = 0; i < tree.size(); ++i) {
    UGraphSpec::Link link{"", name(tree[i].first), name(tree[i].second), tree_weight[i], 1.0};
    (tree_is_switch[i] ? spec.switches : spec.edges).push_back(std::move(link));
  }
  for (const Pair& p : extra) spec.edges.push_back({"", name(p.first), name(p.second), draw_weight(), 1.0});
  for (const Pair& p : switch_pairs) {
    spec.switches.push_back({"", name(p.first), name(p.second), draw_weight(), 1.0});
  }
  for (std::size_t i = 0; i < spec.edges.size(); ++i) spec.edges[i].id = "e" + std::to_string(i);
  for (std::size_t i = 0; i < spec.switches.size(); ++i) {
    spec.switches[i].id = "s" + std::to_string(i);
    spec.switches[i].prob = draw_prob();
  }

  // Farthest pair along the tree, lowest indices on ties.
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
  for (std::size_t i = 0; i < tree.size(); ++i) {
    adj[tree[i].first].emplace_back(tree[i].second, tree_weight[i]);
    adj[tree[i].second].emplace_back(tree[i].first, tree_weight[i]);
  }
  Pair best{0, 1};
  double best_dist = -1.0;
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<double> dist(n, -1.0);
    std::vector<std::size_t> stack{s};
    dist[s] = 0.0;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (auto [v, w] : adj[u]) {
        if (dist[v] < 0.0) {
          dist[v] = dist[u] + w;
          stack.push_back(v);
        }
      }
    }
    for (std::size_t t = s + 1; t < n; ++t) {
      if (dist[t] > best_dist) {
        best_dist = dist[t];
        best = {s, t};
      }
    }
  }
  spec.start = name(best.first);
  spec.goal = name(best.second);
  return UGraph::create(spec);
}

}  // namespace uplan
