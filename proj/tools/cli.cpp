#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "uplan/decision_graph.hpp"
#include "uplan/error.hpp"
#include "uplan/generator.hpp"
#include "uplan/oracle.hpp"
#include "uplan/planner.hpp"
#include "uplan/policy_document.hpp"
#include "uplan/simulator.hpp"

namespace uplan::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

class IoFailure : public Error {
 public:
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text) || !out.flush()) throw IoFailure("cannot write '" + path + "'");
}

// Summary numbers carry 12 significant digits.
ordered_json number(double x) {
  if (x == kUnreachable) return nullptr;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return std::stod(buf);
}

struct PlanOptions {
  std::string instance;
  std::size_t max_switches = BuildLimits{}.max_switches;
  std::size_t max_nodes = BuildLimits{}.max_nodes;

  BuildLimits limits() const {
    BuildLimits l;
    l.max_switches = max_switches;
    l.max_nodes = max_nodes;
    return l;
  }
};

void add_limit_flags(CLI::App* cmd, PlanOptions& o) {
  cmd->add_option("instance", o.instance, "instance document (JSON)")->required();
  cmd->add_option("--max-switches", o.max_switches, "switch cap for planning");
  cmd->add_option("--max-nodes", o.max_nodes, "node cap for the representing graph");
}

struct Planned {
  UGraph graph;
  RepresentingGraph rg;
  Solution solution;
};

std::unique_ptr<Planned> plan_instance(const PlanOptions& o, std::ostream& err) {
  auto p = std::make_unique<Planned>(Planned{load_ugraph(read_file(o.instance)), {}, {}});
  p->rg = build_representing_graph(p->graph, o.limits());
  p->solution = solve(p->rg);
  write_stats(err, graph_stats(p->rg));
  return p;
}

PolicyDocument load_policy_for(const UGraph& g, const std::string& path) {
  PolicyDocument doc = parse_policy(read_file(path));
  if (doc.instance_digest != instance_digest(g)) {
    throw PreconditionError("policy digest " + doc.instance_digest + " does not match instance digest " +
                            instance_digest(g));
  }
  return doc;
}

int cmd_plan(const PlanOptions& o, const std::string& policy_path, const std::string& dot_path, bool pruned,
             std::ostream& out, std::ostream& err) {
  const auto p = plan_instance(o, err);
  const UGraph& g = p->graph;
  const KnowledgeState k = KnowledgeState::all_unknown(g);
  const double o_sd = distances_from(g, k, ViewMode::kOptimistic, g.goal())[g.start()];
  const double p_sd = distances_from(g, k, ViewMode::kPessimistic, g.goal())[g.start()];

  if (!policy_path.empty()) {
    write_file(policy_path,
               dump_policy(make_policy_document(p->rg, p->solution.policy, p->solution.values.root_value)));
  }
  if (!dot_path.empty()) write_file(dot_path, to_dot(p->rg, pruned ? &p->solution.policy : nullptr));

  ordered_json summary;
  summary["optimal_expected_cost"] = number(p->solution.values.root_value);
  summary["optimistic_sd"] = number(o_sd);
  summary["pessimistic_sd"] = number(p_sd);
  summary["reach_probability"] = number(reach_probability(p->rg, p->solution.policy));
  summary["states"] = p->rg.states.size();
  summary["natures"] = p->rg.natures.size();
  out << summary.dump() << '\n';
  return kOk;
}

int cmd_eval(const PlanOptions& o, const std::string& policy_path, bool exact, std::ostream& out) {
  const UGraph g = load_ugraph(read_file(o.instance));
  const PolicyDocument doc = load_policy_for(g, policy_path);
  ordered_json result;
  if (exact) {
    const PolicyValue v = exact_policy_value(g, doc);
    result["method"] = "worlds";
    result["expected_cost"] = number(v.expected_cost);
    result["reach_probability"] = number(v.reach_probability);
  } else {
    const RepresentingGraph rg = build_representing_graph(g, o.limits());
    const Policy policy = policy_from_document(rg, doc);
    result["method"] = "recursion";
    result["expected_cost"] = number(evaluate_policy(rg, policy).root_value);
    result["reach_probability"] = number(reach_probability(rg, policy));
  }
  out << result.dump() << '\n';
  return kOk;
}

int cmd_oracle(const PlanOptions& o, const std::string& policy_path, std::ostream& out, std::ostream& err) {
  std::unique_ptr<Planned> planned;
  std::unique_ptr<UGraph> graph;
  PolicyDocument doc;
  if (policy_path.empty()) {
    planned = plan_instance(o, err);
    doc = make_policy_document(planned->rg, planned->solution.policy, planned->solution.values.root_value);
  } else {
    graph = std::make_unique<UGraph>(load_ugraph(read_file(o.instance)));
    doc = load_policy_for(*graph, policy_path);
  }
  const UGraph& g = planned ? planned->graph : *graph;

  ordered_json result;
  result["expectimax_value"] = number(layered_expectimax_value(g));
  ordered_json worlds = ordered_json::array();
  PolicyValue total;
  for (const World& w : enumerate_worlds(g)) {
    ordered_json row;
    ordered_json status = ordered_json::object();
    for (std::size_t j = 0; j < g.switch_count(); ++j) {
      status[g.connection(g.switch_connection(j)).id] = w.on[j] ? "on" : "off";
    }
    row["switches"] = std::move(status);
    row["probability"] = number(w.probability);
    if (w.probability > 0.0) {
      const RunResult r = run_in_world(g, doc, w);
      total.expected_cost += w.probability * r.cost;
      if (r.outcome == Outcome::kReachedGoal) total.reach_probability += w.probability;
      row["cost"] = number(r.cost);
      row["outcome"] = r.outcome == Outcome::kReachedGoal ? "goal" : "unreachable";
    } else {
      row["cost"] = nullptr;
      row["outcome"] = nullptr;
    }
    worlds.push_back(std::move(row));
  }
  result["policy_value"] = number(total.expected_cost);
  result["reach_probability"] = number(total.reach_probability);
  result["worlds"] = std::move(worlds);
  out << result.dump() << '\n';
  return kOk;
}

int cmd_simulate(const PlanOptions& o, const std::string& strategy_name, const std::string& policy_path,
                 std::size_t runs, std::uint64_t seed, unsigned threads, std::ostream& out, std::ostream& err) {
  std::unique_ptr<Planned> planned;
  std::unique_ptr<UGraph> graph;
  if (strategy_name == "optimal" && policy_path.empty()) {
    planned = plan_instance(o, err);
  } else {
    graph = std::make_unique<UGraph>(load_ugraph(read_file(o.instance)));
  }
  const UGraph& g = planned ? planned->graph : *graph;

  std::unique_ptr<Strategy> strategy;
  if (strategy_name == "optimal") {
    PolicyDocument doc = planned ? make_policy_document(planned->rg, planned->solution.policy,
                                                        planned->solution.values.root_value)
                                 : load_policy_for(g, policy_path);
    strategy = std::make_unique<OptimalPolicyStrategy>(g, std::move(doc));
  } else if (strategy_name == "optimistic") {
    strategy = std::make_unique<OptimisticReplanner>();
  } else {
    strategy = std::make_unique<PessimisticDirect>();
  }
  const TrialStats stats = monte_carlo(g, *strategy, runs, seed, threads);
  if (stats.degenerate) err << "warning: a single run has no spread; stderr reported as 0\n";
  out << to_json(stats) << '\n';
  return kOk;
}

int cmd_info(const std::string& path, std::ostream& out, std::ostream& err) {
  UGraph g = [&] {
    try {
      return load_ugraph(read_file(path));
    } catch (const ValidationError& e) {
      ordered_json report;
      report["valid"] = false;
      report["issues"] = e.issues();
      out << report.dump() << '\n';
      throw;
    }
  }();
  const Configuration c = Configuration::initial(g);
  const ConfigClass cls = classify(c);
  const CurrentConnections cc = current_connections(c);
  ordered_json info;
  info["valid"] = true;
  info["digest"] = instance_digest(g);
  info["vertices"] = g.vertex_count();
  info["edges"] = g.edge_count();
  info["switches"] = g.switch_count();
  info["class"] = to_string(cls.kind);
  if (cls.kind == ConfigClass::Kind::kGoodTerminal) info["remaining"] = number(cls.remaining);
  info["optimistic_sd"] =
      number(shortest_distance(g, c.knowledge, ViewMode::kOptimistic, c.current, c.goal).value_or(kUnreachable));
  info["pessimistic_sd"] =
      number(shortest_distance(g, c.knowledge, ViewMode::kPessimistic, c.current, c.goal).value_or(kUnreachable));
  auto ids = [&](const std::vector<ConnectionId>& v) {
    std::vector<std::string> out_ids;
    for (ConnectionId id : v) out_ids.push_back(g.connection(id).id);
    return out_ids;
  };
  info["current_edges"] = ids(cc.edges);
  info["current_switches"] = ids(cc.switches);
  out << info.dump() << '\n';
  (void)err;
  return kOk;
}

int cmd_export_dot(const PlanOptions& o, const std::string& policy_path, bool optimal, const std::string& out_path,
                   std::ostream& out, std::ostream& err) {
  const auto p = plan_instance(o, err);
  std::string dot;
  if (!policy_path.empty()) {
    const Policy policy = policy_from_document(p->rg, load_policy_for(p->graph, policy_path));
    dot = to_dot(p->rg, &policy);
  } else if (optimal) {
    dot = to_dot(p->rg, &p->solution.policy);
  } else {
    dot = to_dot(p->rg);
  }
  if (out_path.empty()) {
    out << dot;
  } else {
    write_file(out_path, dot);
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Expected-cost navigation planner for graphs with uncertain switches", "uplan"};
  app.require_subcommand(1);

  PlanOptions plan_opts;
  std::string policy_path, dot_path;
  bool pruned = false;
  auto* plan = app.add_subcommand("plan", "compute the optimal navigation policy");
  add_limit_flags(plan, plan_opts);
  plan->add_option("--policy", policy_path, "write the policy document here");
  plan->add_option("--dot", dot_path, "write the representing graph (DOT) here");
  plan->add_flag("--pruned", pruned, "keep only arcs chosen by the optimal policy in --dot");

  PlanOptions eval_opts;
  std::string eval_policy;
  bool exact = false;
  auto* eval = app.add_subcommand("eval", "expected cost of a policy document");
  add_limit_flags(eval, eval_opts);
  eval->add_option("--policy", eval_policy, "policy document")->required();
  eval->add_flag("--exact", exact, "aggregate over every world instead of the recursion");

  PlanOptions oracle_opts;
  std::string oracle_policy;
  auto* oracle = app.add_subcommand("oracle", "ground-truth values by exhaustive enumeration");
  add_limit_flags(oracle, oracle_opts);
  oracle->add_option("--policy", oracle_policy, "policy document (default: the optimal policy)");

  PlanOptions sim_opts;
  std::string strategy = "optimal", sim_policy;
  std::size_t runs = 10000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo execution in sampled worlds");
  add_limit_flags(simulate, sim_opts);
  simulate->add_option("--strategy", strategy, "optimal | optimistic | pessimistic")
      ->check(CLI::IsMember({"optimal", "optimistic", "pessimistic"}));
  simulate->add_option("--policy", sim_policy, "policy document for the optimal strategy");
  simulate->add_option("--runs", runs, "number of runs")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", seed, "64-bit seed");
  simulate->add_option("--threads", threads, "worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);

  GeneratorParams gen_params;
  std::string gen_out;
  std::vector<double> weight_range, prob_range;
  auto* gen = app.add_subcommand("gen", "generate a random instance");
  gen->add_option("--vertices", gen_params.vertices, "vertex count (>= 2)");
  gen->add_option("--extra-edges", gen_params.extra_edges, "certain edges beyond the spanning tree");
  gen->add_option("--switches", gen_params.switches, "switch count");
  gen->add_option("--tree-switches", gen_params.tree_switches, "switches placed on spanning-tree links");
  gen->add_option("--weight-range", weight_range, "lo hi")->expected(2);
  gen->add_option("--prob-range", prob_range, "lo hi")->expected(2);
  gen->add_flag("--integer-weights", gen_params.integer_weights, "draw integer weights");
  gen->add_option("--seed", gen_params.seed, "64-bit seed");
  gen->add_option("--out", gen_out, "write the instance here instead of stdout");

  std::string info_path;
  auto* info = app.add_subcommand("info", "classify the initial configuration");
  info->add_option("instance", info_path, "instance document (JSON)")->required();

  PlanOptions dot_opts;
  std::string dot_policy, dot_out;
  bool dot_optimal = false;
  auto* export_dot = app.add_subcommand("export-dot", "render the representing graph as DOT");
  add_limit_flags(export_dot, dot_opts);
  export_dot->add_option("--policy", dot_policy, "prune to this policy");
  export_dot->add_flag("--optimal", dot_optimal, "prune to the optimal policy");
  export_dot->add_option("--out", dot_out, "write here instead of stdout");

  std::vector<std::string> argv_storage{"uplan"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    if (*plan) return cmd_plan(plan_opts, policy_path, dot_path, pruned, out, err);
    if (*eval) return cmd_eval(eval_opts, eval_policy, exact, out);
    if (*oracle) return cmd_oracle(oracle_opts, oracle_policy, out, err);
    if (*simulate) return cmd_simulate(sim_opts, strategy, sim_policy, runs, seed, threads, out, err);
    if (*gen) {
      if (weight_range.size() == 2) gen_params.weight_lo = weight_range[0], gen_params.weight_hi = weight_range[1];
      if (prob_range.size() == 2) gen_params.prob_lo = prob_range[0], gen_params.prob_hi = prob_range[1];
      const std::string text = serialize_ugraph(generate_instance(gen_params), 2) + "\n";
      if (gen_out.empty()) {
        out << text;
      } else {
        write_file(gen_out, text);
      }
      return kOk;
    }
    if (*info) return cmd_info(info_path, out, err);
    if (*export_dot) return cmd_export_dot(dot_opts, dot_policy, dot_optimal, dot_out, out, err);
  } catch (const IoFailure& e) {
    err << "error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const LimitError& e) {
    err << "error: " << e.what() << '\n';
    return kLimitExceeded;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
  return kInvalidInput;
}

}  // namespace uplan::cli
