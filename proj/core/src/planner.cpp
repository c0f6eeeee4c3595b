#include "uplan/planner.hpp"

#include <algorithm>

#include "uplan/error.hpp"

namespace uplan {

namespace {

// Backward induction shared by solve (fixed == nullptr) and evaluate_policy.
class Backward {
 public:
  Backward(const RepresentingGraph& rg, const Policy* fixed)
      : rg_(rg),
        fixed_(fixed),
        state_value_(rg.states.size(), 0.0),
        nature_value_(rg.natures.size(), 0.0),
        state_done_(rg.states.size(), false),
        nature_done_(rg.natures.size(), false) {
    policy_.choice.assign(rg.states.size(), std::nullopt);
  }

  // With every_node set, nodes off the root's policy paths are valued too.
  Solution run(bool every_node = false) {
    Solution out;
    out.values.root_value = rg_.root.is_state() ? state(rg_.root.id) : nature(rg_.root.id);
    if (every_node) {
      for (std::size_t i = 0; i < rg_.states.size(); ++i) state(i);
      for (std::size_t i = 0; i < rg_.natures.size(); ++i) nature(i);
    }
    out.values.state_value = std::move(state_value_);
    out.values.nature_value = std::move(nature_value_);
    out.policy = std::move(policy_);
    out.visits = visits_;
    return out;
  }

 private:
  double target(NodeRef r) { return r.is_state() ? state(r.id) : nature(r.id); }

  double state(std::size_t id) {
    ++visits_;
    if (state_done_[id]) return state_value_[id];
    const StateNode& s = rg_.states[id];
    double best = 0.0;
    if (s.cls.kind != ConfigClass::Kind::kActive) {
      best = terminal_value(s);
    } else if (fixed_ != nullptr) {
      const std::size_t i = *fixed_->choice[id];
      ++visits_;
      best = s.actions[i].move_cost + target(s.actions[i].target);
      policy_.choice[id] = i;
    } else {
      std::size_t arg = 0;
      for (std::size_t i = 0; i < s.actions.size(); ++i) {
        ++visits_;
        const double v = s.actions[i].move_cost + target(s.actions[i].target);
        if (i == 0 || v < best) {
          best = v;
          arg = i;
        }
      }
      policy_.choice[id] = arg;
    }
    state_done_[id] = true;
    state_value_[id] = best;
    return best;
  }

  double nature(std::size_t id) {
    ++visits_;
    if (nature_done_[id]) return nature_value_[id];
    double sum = 0.0;
    for (const NatureBranch& b : rg_.natures[id].branches) {
      ++visits_;
      sum += b.probability * state(b.state);
    }
    nature_done_[id] = true;
    nature_value_[id] = sum;
    return sum;
  }

  const RepresentingGraph& rg_;
  const Policy* fixed_;
  std::vector<double> state_value_;
  std::vector<double> nature_value_;
  std::vector<bool> state_done_;
  std::vector<bool> nature_done_;
  Policy policy_;
  std::size_t visits_ = 0;
};

std::vector<bool> reachable_states_under(const RepresentingGraph& rg, const Policy& policy,
                                         std::vector<bool>& natures) {
  std::vector<bool> states(rg.states.size(), false);
  natures.assign(rg.natures.size(), false);
  std::vector<NodeRef> stack{rg.root};
  while (!stack.empty()) {
    const NodeRef r = stack.back();
    stack.pop_back();
    const bool seen = r.is_state() ? states[r.id] : natures[r.id];
    if (seen) continue;
    if (r.is_state()) {
      states[r.id] = true;
      if (const auto& c = policy.choice[r.id]) stack.push_back(rg.states[r.id].actions[*c].target);
    } else {
      natures[r.id] = true;
      for (const NatureBranch& b : rg.natures[r.id].branches) stack.push_back(NodeRef::state(b.state));
    }
  }
  return states;
}

}  // namespace

double terminal_value(const StateNode& s) {
  return s.cls.kind == ConfigClass::Kind::kGoodTerminal ? s.cls.remaining : 0.0;
}

Solution solve(const RepresentingGraph& rg) { return Backward(rg, nullptr).run(); }

ValueTable evaluate_policy(const RepresentingGraph& rg, const Policy& policy) {
  require_complete(rg, policy);
  return Backward(rg, &policy).run(true).values;
}

std::vector<NodeRef> topological_order(const RepresentingGraph& rg) {
  const std::size_t n_states = rg.states.size();
  std::vector<char> mark(rg.node_count(), 0);  // 0 new, 1 open, 2 closed
  auto index = [&](NodeRef r) { return r.is_state() ? r.id : n_states + r.id; };
  std::vector<NodeRef> post;
  post.reserve(rg.node_count());

  struct Frame {
    NodeRef node;
    std::size_t next;
  };
  auto children = [&](NodeRef r, std::size_t i, NodeRef& child) {
    if (r.is_state()) {
      const auto& actions = rg.states[r.id].actions;
      if (i >= actions.size()) return false;
      child = actions[i].target;
    } else {
      const auto& branches = rg.natures[r.id].branches;
      if (i >= branches.size()) return false;
      child = NodeRef::state(branches[i].state);
    }
    return true;
  };

  std::vector<Frame> stack{{rg.root, 0}};
  mark[index(rg.root)] = 1;
  while (!stack.empty()) {
    Frame& top = stack.back();
    NodeRef child;
    if (children(top.node, top.next++, child)) {
      if (mark[index(child)] == 0) {
        mark[index(child)] = 1;
        stack.push_back({child, 0});
      }
    } else {
      mark[index(top.node)] = 2;
      post.push_back(top.node);
      stack.pop_back();
    }
  }
  std::reverse(post.begin(), post.end());
  return post;
}

double reach_probability(const RepresentingGraph& rg, const Policy& policy) {
  require_complete(rg, policy);
  std::vector<double> state_mass(rg.states.size(), 0.0);
  std::vector<double> nature_mass(rg.natures.size(), 0.0);
  (rg.root.is_state() ? state_mass[rg.root.id] : nature_mass[rg.root.id]) = 1.0;
  double absorbed = 0.0;
  for (NodeRef r : topological_order(rg)) {
    if (r.is_state()) {
      const StateNode& s = rg.states[r.id];
      const double m = state_mass[r.id];
      if (s.cls.kind == ConfigClass::Kind::kGoodTerminal) {
        absorbed += m;
      } else if (s.cls.kind == ConfigClass::Kind::kActive) {
        const NodeRef t = s.actions[*policy.choice[r.id]].target;
        (t.is_state() ? state_mass[t.id] : nature_mass[t.id]) += m;
      }
    } else {
      const double m = nature_mass[r.id];
      for (const NatureBranch& b : rg.natures[r.id].branches) state_mass[b.state] += b.probability * m;
    }
  }
  return absorbed;
}

RepresentingGraph policy_subgraph(const RepresentingGraph& rg, const Policy& policy) {
  require_complete(rg, policy);
  std::vector<bool> keep_nature;
  const std::vector<bool> keep_state = reachable_states_under(rg, policy, keep_nature);

  constexpr std::size_t kDropped = static_cast<std::size_t>(-1);
  std::vector<std::size_t> state_id(rg.states.size(), kDropped);
  std::vector<std::size_t> nature_id(rg.natures.size(), kDropped);
  RepresentingGraph out;
  out.graph = rg.graph;
  for (const StateNode& s : rg.states) {
    if (keep_state[s.id]) state_id[s.id] = out.states.size(), out.states.push_back(s);
  }
  for (const NatureNode& n : rg.natures) {
    if (keep_nature[n.id]) nature_id[n.id] = out.natures.size(), out.natures.push_back(n);
  }
  auto remap = [&](NodeRef r) {
    return r.is_state() ? NodeRef::state(state_id[r.id]) : NodeRef::nature(nature_id[r.id]);
  };
  for (StateNode& s : out.states) {
    const std::size_t old = s.id;
    s.id = state_id[old];
    if (const auto& c = policy.choice[old]) {
      ActionArc chosen = s.actions[*c];
      chosen.target = remap(chosen.target);
      s.actions.assign(1, std::move(chosen));
    } else {
      s.actions.clear();
    }
  }
  for (NatureNode& n : out.natures) {
    n.id = nature_id[n.id];
    if (n.source) {
      n.source = state_id[*n.source];
      n.source_arc = 0;
    }
    for (NatureBranch& b : n.branches) b.state = state_id[b.state];
  }
  out.root = remap(rg.root);
  return out;
}

}  // namespace uplan
