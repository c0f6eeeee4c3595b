#include "uplan/policy_document.hpp"

#include <nlohmann/json.hpp>

#include "uplan/error.hpp"

namespace uplan {

namespace {

using ordered_json = nlohmann::ordered_json;

const char* type_name(PolicyAction::Type t) {
  switch (t) {
    case PolicyAction::Type::kMove: return "move";
    case PolicyAction::Type::kFinish: return "finish";
    case PolicyAction::Type::kHalt: return "halt";
  }
  return "halt";
}

}  // namespace

PolicyDocument make_policy_document(const RepresentingGraph& rg, const Policy& policy, double root_value) {
  require_complete(rg, policy);
  const UGraph& g = *rg.graph;
  PolicyDocument doc;
  doc.instance_digest = instance_digest(g);
  doc.root_value = root_value;
  for (const StateNode& s : rg.states) {
    PolicyEntry entry;
    entry.cls = to_string(s.cls.kind);
    switch (s.cls.kind) {
      case ConfigClass::Kind::kGoodTerminal:
        entry.action.type = PolicyAction::Type::kFinish;
        entry.action.cost = s.cls.remaining;
        break;
      case ConfigClass::Kind::kBadTerminal:
        entry.action.type = PolicyAction::Type::kHalt;
        break;
      default: {
        const GenericTransition& t = s.actions[*policy.choice[s.id]].action;
        entry.action.type = PolicyAction::Type::kMove;
        entry.action.to = g.vertex_name(t.successor.current);
        for (ConnectionId c : t.waypoints) entry.action.waypoints.push_back(g.connection(c).id);
        entry.action.cost = t.cost;
        break;
      }
    }
    doc.states.emplace(canonical_key(s.config), std::move(entry));
  }
  return doc;
}

std::string dump_policy(const PolicyDocument& doc, int indent) {
  ordered_json j;
  j["instance_digest"] = doc.instance_digest;
  j["root_value"] = doc.root_value;
  ordered_json states = ordered_json::object();
  for (const auto& [key, entry] : doc.states) {
    ordered_json action;
    action["type"] = type_name(entry.action.type);
    if (entry.action.type == PolicyAction::Type::kMove) {
      action["to"] = entry.action.to;
      action["waypoints"] = entry.action.waypoints;
    }
    if (entry.action.type != PolicyAction::Type::kHalt) action["cost"] = entry.action.cost;
    states[key] = {{"class", entry.cls}, {"action", std::move(action)}};
  }
  j["states"] = std::move(states);
  return j.dump(indent) + "\n";
}

PolicyDocument parse_policy(std::string_view text) {
  PolicyDocument doc;
  try {
    const auto j = nlohmann::json::parse(text);
    doc.instance_digest = j.at("instance_digest").get<std::string>();
    doc.root_value = j.at("root_value").get<double>();
    for (const auto& [key, item] : j.at("states").items()) {
      PolicyEntry entry;
      entry.cls = item.at("class").get<std::string>();
      const auto& action = item.at("action");
      const auto type = action.at("type").get<std::string>();
      if (type == "move") {
        entry.action.type = PolicyAction::Type::kMove;
        entry.action.to = action.at("to").get<std::string>();
        entry.action.waypoints = action.at("waypoints").get<std::vector<std::string>>();
        entry.action.cost = action.at("cost").get<double>();
      } else if (type == "finish") {
        entry.action.type = PolicyAction::Type::kFinish;
        entry.action.cost = action.at("cost").get<double>();
      } else if (type == "halt") {
        entry.action.type = PolicyAction::Type::kHalt;
      } else {
        throw ParseError("policy state '" + key + "': unknown action type '" + type + "'");
      }
      doc.states.emplace(key, std::move(entry));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed policy document: ") + e.what());
  }
  return doc;
}

Policy policy_from_document(const RepresentingGraph& rg, const PolicyDocument& doc) {
  const UGraph& g = *rg.graph;
  if (doc.instance_digest != instance_digest(g)) {
    throw PreconditionError("policy digest " + doc.instance_digest + " does not match instance digest " +
                            instance_digest(g));
  }
  Policy policy;
  policy.choice.assign(rg.states.size(), std::nullopt);
  for (const StateNode& s : rg.states) {
    if (s.cls.kind != ConfigClass::Kind::kActive) continue;
    const std::string key = canonical_key(s.config);
    auto it = doc.states.find(key);
    if (it == doc.states.end() || it->second.action.type != PolicyAction::Type::kMove) {
      throw PreconditionError("policy has no move for state " + key);
    }
    const PolicyAction& move = it->second.action;
    for (std::size_t i = 0; i < s.actions.size(); ++i) {
      const GenericTransition& t = s.actions[i].action;
      if (g.vertex_name(t.successor.current) != move.to) continue;
      std::vector<std::string> ids;
      for (ConnectionId c : t.waypoints) ids.push_back(g.connection(c).id);
      if (ids == move.waypoints) {
        policy.choice[s.id] = i;
        break;
      }
    }
    if (!policy.choice[s.id]) {
      throw PreconditionError("policy move at " + key + " is not a generic transition of that state");
    }
  }
  return policy;
}

}  // namespace uplan
