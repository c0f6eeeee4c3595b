#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "uplan/planner.hpp"

namespace uplan {

// Serializable plan: every state of the representing graph keyed by its
// canonical key, with the full walk for each move so that an executor never
// has to re-plan.
struct PolicyAction {
  enum class Type { kMove, kFinish, kHalt };
  Type type = Type::kHalt;
  std::string to;                      // move only
  std::vector<std::string> waypoints;  // move only, connection ids
  double cost = 0.0;                   // move and finish
};

struct PolicyEntry {
  std::string cls;  // "Active", "GoodTerminal" or "BadTerminal"
  PolicyAction action;
};

struct PolicyDocument {
  std::string instance_digest;
  double root_value = 0.0;
  std::map<std::string, PolicyEntry> states;
};

PolicyDocument make_policy_document(const RepresentingGraph& rg, const Policy& policy, double root_value);

std::string dump_policy(const PolicyDocument& doc, int indent = 2);
// Throws ParseError on malformed documents.
PolicyDocument parse_policy(std::string_view text);

// Maps a document back onto rg's arc indices. Throws PreconditionError when
// the digest differs, a state is missing, or a move matches no arc.
Policy policy_from_document(const RepresentingGraph& rg, const PolicyDocument& doc);

}  // namespace uplan
