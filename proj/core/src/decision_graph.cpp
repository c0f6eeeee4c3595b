#include "uplan/decision_graph.hpp"

#include <cmath>
#include <cstdio>
#include <deque>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "uplan/error.hpp"

namespace uplan {

namespace {

std::string knowledge_bytes(const KnowledgeState& k) {
  std::string bytes(k.size(), '\0');
  for (std::size_t i = 0; i < k.size(); ++i) bytes[i] = static_cast<char>(k[i]);
  return bytes;
}

std::string binary_key(const Configuration& c) {
  std::string key = knowledge_bytes(c.knowledge);
  key.append(reinterpret_cast<const char*>(&c.current), sizeof(c.current));
  return key;
}

std::string fmt_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

class Builder {
 public:
  Builder(const UGraph& g, const BuildLimits& limits) : g_(g), limits_(limits) { rg_.graph = &g; }

  RepresentingGraph run() {
    if (g_.switch_count() > limits_.max_switches) {
      throw LimitError("instance has " + std::to_string(g_.switch_count()) +
                       " switches, above the switch cap of " + std::to_string(limits_.max_switches) +
                       " (max_switches)");
    }
    const Configuration initial = Configuration::initial(g_);
    const ConfigClass cls = analysis(initial.knowledge).classify(initial.current);
    if (cls.kind == ConfigClass::Kind::kUncontrolled) {
      rg_.root = NodeRef::nature(add_nature(initial, std::nullopt, std::nullopt));
    } else {
      rg_.root = NodeRef::state(intern(initial, cls));
    }
    while (!work_.empty()) {
      const std::size_t id = work_.front();
      work_.pop_front();
      expand(id);
    }
    return std::move(rg_);
  }

 private:
  const KnowledgeAnalysis& analysis(const KnowledgeState& k) {
    auto& slot = analyses_[knowledge_bytes(k)];
    if (!slot) slot = std::make_unique<KnowledgeAnalysis>(g_, k, g_.goal());
    return *slot;
  }

  void reserve_node() {
    if (rg_.node_count() >= limits_.max_nodes) {
      throw LimitError("representing graph exceeds the node cap of " + std::to_string(limits_.max_nodes) +
                       " (max_nodes)");
    }
  }

  std::size_t intern(const Configuration& c, const ConfigClass& cls) {
    auto [it, inserted] = state_index_.try_emplace(binary_key(c), rg_.states.size());
    if (!inserted) return it->second;
    reserve_node();
    StateNode node;
    node.id = rg_.states.size();
    node.config = c;
    node.cls = cls;
    rg_.states.push_back(std::move(node));
    if (cls.kind == ConfigClass::Kind::kActive) work_.push_back(it->second);
    return it->second;
  }

  std::size_t add_nature(const Configuration& c, std::optional<std::size_t> source,
                         std::optional<std::size_t> arc) {
    reserve_node();
    const std::string key = binary_key(c);
    auto cached = branch_cache_.find(key);
    std::vector<NatureBranch> branches;
    if (cached != branch_cache_.end()) {
      branches = cached->second;
    } else {
      for (NatureOutcome& o : nature_outcomes(c, limits_.max_revealed)) {
        const ConfigClass cls = analysis(o.result.knowledge).classify(o.result.current);
        if (cls.kind == ConfigClass::Kind::kUncontrolled) {
          throw std::logic_error("revelation left an unknown switch at the current vertex");
        }
        branches.push_back({o.probability, intern(o.result, cls)});
      }
      branch_cache_.emplace(key, branches);
    }
    NatureNode node;
    node.id = rg_.natures.size();
    node.source = source;
    node.source_arc = arc;
    node.config = c;
    node.branches = std::move(branches);
    rg_.natures.push_back(std::move(node));
    return rg_.natures.size() - 1;
  }

  void expand(std::size_t id) {
    const Configuration config = rg_.states[id].config;
    std::vector<GenericTransition> successors = generic_successors(config, analysis(config.knowledge));
    std::vector<ActionArc> arcs;
    arcs.reserve(successors.size());
    for (std::size_t i = 0; i < successors.size(); ++i) {
      GenericTransition& t = successors[i];
      ActionArc arc;
      arc.move_cost = t.cost;
      if (t.successor_class.kind == ConfigClass::Kind::kUncontrolled) {
        arc.target = NodeRef::nature(add_nature(t.successor, id, i));
      } else {
        arc.target = NodeRef::state(intern(t.successor, t.successor_class));
      }
      arc.action = std::move(t);
      arcs.push_back(std::move(arc));
    }
    rg_.states[id].actions = std::move(arcs);
  }

  const UGraph& g_;
  BuildLimits limits_;
  RepresentingGraph rg_;
  std::deque<std::size_t> work_;
  std::unordered_map<std::string, std::size_t> state_index_;
  std::unordered_map<std::string, std::unique_ptr<KnowledgeAnalysis>> analyses_;
  std::unordered_map<std::string, std::vector<NatureBranch>> branch_cache_;
};

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out;
}

std::string node_name(NodeRef ref) { return (ref.is_state() ? "s" : "n") + std::to_string(ref.id); }

}  // namespace

std::size_t RepresentingGraph::arc_count() const {
  std::size_t n = 0;
  for (const auto& s : states) n += s.actions.size();
  for (const auto& n2 : natures) n += n2.branches.size();
  return n;
}

std::string canonical_key(const Configuration& c) {
  const UGraph& g = *c.graph;
  std::string key = g.vertex_name(c.current) + "|";
  for (std::size_t i = 0; i < g.switch_count(); ++i) {
    if (i > 0) key += ',';
    key += g.connection(g.switch_connection(i)).id;
    switch (c.knowledge[i]) {
      case SwitchStatus::kUnknown: key += "=?"; break;
      case SwitchStatus::kOn: key += "=on"; break;
      case SwitchStatus::kOff: key += "=off"; break;
    }
  }
  return key;
}

RepresentingGraph build_representing_graph(const UGraph& g, const BuildLimits& limits) {
  return Builder(g, limits).run();
}

void require_complete(const RepresentingGraph& rg, const Policy& policy) {
  if (policy.choice.size() != rg.states.size()) {
    throw PreconditionError("policy covers " + std::to_string(policy.choice.size()) + " states, graph has " +
                            std::to_string(rg.states.size()));
  }
  for (const StateNode& s : rg.states) {
    const auto& choice = policy.choice[s.id];
    if (s.cls.kind == ConfigClass::Kind::kActive) {
      if (!choice || *choice >= s.actions.size()) {
        throw PreconditionError("policy has no valid action for state " + canonical_key(s.config));
      }
    } else if (choice) {
      throw PreconditionError("policy chooses an action at terminal " + canonical_key(s.config));
    }
  }
}

MarkovReport check_markov(const RepresentingGraph& rg) {
  MarkovReport report;
  auto fail = [&](std::string msg) {
    report.ok = false;
    report.failures.push_back(std::move(msg));
  };

  for (const StateNode& s : rg.states) {
    const std::string key = canonical_key(s.config);
    ++report.layers[s.config.knowledge.known_count()];
    switch (s.cls.kind) {
      case ConfigClass::Kind::kUncontrolled:
        fail("state: uncontrolled configuration " + key + " is a state node");
        break;
      case ConfigClass::Kind::kGoodTerminal:
      case ConfigClass::Kind::kBadTerminal:
        if (!s.actions.empty()) fail("terminal action: " + key + " has actions besides finishing");
        break;
      case ConfigClass::Kind::kActive:
        if (s.actions.empty()) fail("actions: Active state " + key + " has no action");
        break;
    }
    for (const ActionArc& arc : s.actions) {
      if (!(arc.move_cost > 0.0)) fail("cost: non-positive move cost at " + key);
      if (arc.target.is_state()) {
        if (arc.target.id >= rg.states.size()) {
          fail("arc target: dangling state id from " + key);
        } else if (!rg.states[arc.target.id].cls.is_terminal()) {
          fail("arc target: " + key + " moves directly to a non-terminal state");
        }
      } else if (arc.target.id >= rg.natures.size()) {
        fail("arc target: dangling nature id from " + key);
      }
    }
  }

  for (const NatureNode& n : rg.natures) {
    const std::string key = canonical_key(n.config);
    double sum = 0.0;
    for (const NatureBranch& b : n.branches) {
      sum += b.probability;
      if (!(b.probability > 0.0 && b.probability <= 1.0)) fail("probability: branch outside (0,1] at " + key);
      if (b.state >= rg.states.size()) {
        fail("branch target: dangling state id from " + key);
        continue;
      }
      const KnowledgeState& after = rg.states[b.state].config.knowledge;
      if (!n.config.knowledge.refined_by(after) || after.known_count() <= n.config.knowledge.known_count()) {
        fail("monotonicity: branch from " + key + " to " + canonical_key(rg.states[b.state].config) +
             " does not reveal new switches");
      }
    }
    if (!(std::abs(sum - 1.0) <= 1e-12)) {
      fail("normalization: branches at " + key + " sum to " + fmt_number(sum));
    }
  }

  // Kahn's algorithm over states (0..S-1) and natures (S..S+N-1).
  const std::size_t n_states = rg.states.size();
  const std::size_t total = rg.node_count();
  auto index = [&](NodeRef r) { return r.is_state() ? r.id : n_states + r.id; };
  std::vector<std::vector<std::size_t>> out(total);
  for (const StateNode& s : rg.states) {
    for (const ActionArc& a : s.actions) {
      if ((a.target.is_state() && a.target.id < n_states) || (!a.target.is_state() && a.target.id < rg.natures.size())) {
        out[s.id].push_back(index(a.target));
      }
    }
  }
  for (const NatureNode& n : rg.natures) {
    for (const NatureBranch& b : n.branches) {
      if (b.state < n_states) out[n_states + n.id].push_back(b.state);
    }
  }
  std::vector<std::size_t> indegree(total, 0);
  for (const auto& succ : out) {
    for (std::size_t v : succ) ++indegree[v];
  }
  std::vector<std::size_t> ready;
  for (std::size_t v = 0; v < total; ++v) {
    if (indegree[v] == 0) ready.push_back(v);
  }
  std::size_t processed = 0;
  while (!ready.empty()) {
    const std::size_t v = ready.back();
    ready.pop_back();
    ++processed;
    for (std::size_t w : out[v]) {
      if (--indegree[w] == 0) ready.push_back(w);
    }
  }
  if (processed != total) fail("acyclicity: the graph contains a cycle");

  if (total > 0) {
    std::vector<bool> seen(total, false);
    std::vector<std::size_t> stack{index(rg.root)};
    seen[stack.back()] = true;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t w : out[v]) {
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    for (std::size_t v = 0; v < total; ++v) {
      if (!seen[v]) {
        fail("reachability: node " + std::string(v < n_states ? "s" + std::to_string(v)
                                                               : "n" + std::to_string(v - n_states)) +
             " is not reachable from the root");
      }
    }
  }
  return report;
}

GraphStats graph_stats(const RepresentingGraph& rg) {
  std::set<std::size_t> layers;
  for (const StateNode& s : rg.states) layers.insert(s.config.knowledge.known_count());
  return {rg.states.size(), rg.natures.size(), rg.arc_count(), layers.size()};
}

void write_stats(std::ostream& os, const GraphStats& stats) {
  os << "states=" << stats.states << '\n'
     << "natures=" << stats.natures << '\n'
     << "arcs=" << stats.arcs << '\n'
     << "layers=" << stats.layers << '\n';
}

std::string to_dot(const RepresentingGraph& rg, const Policy* policy) {
  std::vector<bool> keep_state(rg.states.size(), policy == nullptr);
  std::vector<bool> keep_nature(rg.natures.size(), policy == nullptr);
  if (policy != nullptr) {
    require_complete(rg, *policy);
    std::vector<NodeRef> stack{rg.root};
    while (!stack.empty()) {
      const NodeRef r = stack.back();
      stack.pop_back();
      auto flag = r.is_state() ? keep_state[r.id] : keep_nature[r.id];
      if (flag) continue;
      flag = true;
      if (r.is_state()) {
        const auto& choice = policy->choice[r.id];
        if (choice) stack.push_back(rg.states[r.id].actions[*choice].target);
      } else {
        for (const NatureBranch& b : rg.natures[r.id].branches) stack.push_back(NodeRef::state(b.state));
      }
    }
  }

  std::ostringstream os;
  os << "digraph representing_graph {\n";
  os << "  rankdir=TB;\n";
  for (const StateNode& s : rg.states) {
    if (!keep_state[s.id]) continue;
    os << "  s" << s.id << " [shape=box, label=\"" << dot_escape(canonical_key(s.config)) << "\\n"
       << dot_escape(to_string(s.cls)) << "\"" << (NodeRef::state(s.id) == rg.root ? ", penwidth=2" : "")
       << "];\n";
  }
  for (const NatureNode& n : rg.natures) {
    if (!keep_nature[n.id]) continue;
    os << "  n" << n.id << " [shape=diamond, label=\"" << dot_escape(canonical_key(n.config)) << "\""
       << (NodeRef::nature(n.id) == rg.root ? ", penwidth=2" : "") << "];\n";
  }
  for (const StateNode& s : rg.states) {
    if (!keep_state[s.id]) continue;
    for (std::size_t i = 0; i < s.actions.size(); ++i) {
      if (policy != nullptr && policy->choice[s.id] != i) continue;
      const ActionArc& a = s.actions[i];
      os << "  s" << s.id << " -> " << node_name(a.target) << " [label=\"" << fmt_number(a.move_cost)
         << "\"];\n";
    }
  }
  for (const NatureNode& n : rg.natures) {
    if (!keep_nature[n.id]) continue;
    for (const NatureBranch& b : n.branches) {
      os << "  n" << n.id << " -> s" << b.state << " [style=dashed, label=\"" << fmt_number(b.probability)
         << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace uplan
