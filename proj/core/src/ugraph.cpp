#include "uplan/ugraph.hpp"

#include <cmath>
#include <cstdio>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "uplan/error.hpp"

namespace uplan {

namespace {

using ordered_json = nlohmann::ordered_json;

void check_link(const UGraphSpec::Link& link, bool is_switch,
                const std::unordered_map<std::string, VertexId>& index,
                std::unordered_set<std::string>& seen_ids,
                std::vector<std::string>& issues) {
  const std::string what = std::string(is_switch ? "switch" : "edge") + " '" + link.id + "'";
  if (link.id.empty()) {
    issues.push_back(what + ": empty id");
  } else if (!seen_ids.insert(link.id).second) {
    issues.push_back(what + ": duplicate id");
  }
  const bool has_a = index.count(link.a) != 0;
  const bool has_b = index.count(link.b) != 0;
  if (!has_a) issues.push_back(what + ": unknown vertex '" + link.a + "'");
  if (!has_b) issues.push_back(what + ": unknown vertex '" + link.b + "'");
  if (has_a && has_b && link.a == link.b) issues.push_back(what + ": self-loop on '" + link.a + "'");
  if (!(link.weight > 0.0)) {
    issues.push_back(what + ": non-positive weight");
  } else if (!std::isfinite(link.weight)) {
    issues.push_back(what + ": non-finite weight");
  }
  if (is_switch && !(link.prob >= 0.0 && link.prob <= 1.0)) {
    issues.push_back(what + ": prob outside [0,1]");
  }
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> issues)
    : Error([&] {
        std::string msg = "invalid instance:";
        for (const auto& i : issues) msg += "\n  - " + i;
        return msg;
      }()),
      issues_(std::move(issues)) {}

UGraph UGraph::create(const UGraphSpec& spec) {
  std::vector<std::string> issues;
  std::unordered_map<std::string, VertexId> index;
  if (spec.vertices.empty()) issues.push_back("no vertices");
  for (VertexId v = 0; v < spec.vertices.size(); ++v) {
    if (spec.vertices[v].empty()) issues.push_back("empty vertex name");
    if (!index.emplace(spec.vertices[v], v).second) {
      issues.push_back("duplicate vertex '" + spec.vertices[v] + "'");
    }
  }
  std::unordered_set<std::string> ids;
  for (const auto& e : spec.edges) check_link(e, false, index, ids, issues);
  for (const auto& s : spec.switches) check_link(s, true, index, ids, issues);
  if (index.count(spec.start) == 0) issues.push_back("unknown start vertex '" + spec.start + "'");
  if (index.count(spec.goal) == 0) issues.push_back("unknown goal vertex '" + spec.goal + "'");
  if (!issues.empty()) throw ValidationError(std::move(issues));

  UGraph g;
  g.vertices_ = spec.vertices;
  g.edge_count_ = spec.edges.size();
  g.connections_.reserve(spec.edges.size() + spec.switches.size());
  for (const auto& e : spec.edges) {
    g.connections_.push_back({e.id, index.at(e.a), index.at(e.b), e.weight, ConnectionKind::kEdge, 1.0, 0});
  }
  for (std::size_t i = 0; i < spec.switches.size(); ++i) {
    const auto& s = spec.switches[i];
    g.connections_.push_back({s.id, index.at(s.a), index.at(s.b), s.weight, ConnectionKind::kSwitch, s.prob, i});
  }
  g.incident_.resize(g.vertices_.size());
  for (ConnectionId c = 0; c < g.connections_.size(); ++c) {
    g.incident_[g.connections_[c].u].push_back(c);
    g.incident_[g.connections_[c].v].push_back(c);
  }
  g.start_ = index.at(spec.start);
  g.goal_ = index.at(spec.goal);
  return g;
}

std::optional<VertexId> UGraph::find_vertex(std::string_view name) const {
  for (VertexId v = 0; v < vertices_.size(); ++v) {
    if (vertices_[v] == name) return v;
  }
  return std::nullopt;
}

std::optional<ConnectionId> UGraph::find_connection(std::string_view id) const {
  for (ConnectionId c = 0; c < connections_.size(); ++c) {
    if (connections_[c].id == id) return c;
  }
  return std::nullopt;
}

UGraphSpec UGraph::to_spec() const {
  UGraphSpec spec;
  spec.vertices = vertices_;
  for (const auto& c : connections_) {
    UGraphSpec::Link link{c.id, vertices_[c.u], vertices_[c.v], c.weight, c.prob};
    (c.is_switch() ? spec.switches : spec.edges).push_back(std::move(link));
  }
  spec.start = vertices_[start_];
  spec.goal = vertices_[goal_];
  return spec;
}

UGraph UGraph::scaled(double factor) const {
  UGraphSpec spec = to_spec();
  for (auto& e : spec.edges) e.weight *= factor;
  for (auto& s : spec.switches) s.weight *= factor;
  return create(spec);
}

UGraph UGraph::with_switch_prob(std::size_t i, double prob) const {
  UGraphSpec spec = to_spec();
  spec.switches.at(i).prob = prob;
  return create(spec);
}

UGraphSpec parse_instance(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("instance is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("instance must be a JSON object");

  UGraphSpec spec;
  try {
    for (const auto& v : doc.at("vertices")) spec.vertices.push_back(v.get<std::string>());
    auto read_links = [&](const char* key, bool is_switch, std::vector<UGraphSpec::Link>& out) {
      if (!doc.contains(key)) return;
      for (const auto& item : doc.at(key)) {
        UGraphSpec::Link link;
        link.id = item.at("id").get<std::string>();
        const auto& ends = item.at("ends");
        if (!ends.is_array() || ends.size() != 2) {
          throw ParseError(std::string(key) + " '" + link.id + "': ends must be a pair");
        }
        link.a = ends[0].get<std::string>();
        link.b = ends[1].get<std::string>();
        link.weight = item.at("weight").get<double>();
        if (is_switch) link.prob = item.at("prob").get<double>();
        out.push_back(std::move(link));
      }
    };
    read_links("edges", false, spec.edges);
    read_links("switches", true, spec.switches);
    spec.start = doc.at("start").get<std::string>();
    spec.goal = doc.at("goal").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed instance: ") + e.what());
  }
  return spec;
}

UGraph load_ugraph(std::string_view text) { return UGraph::create(parse_instance(text)); }

std::string serialize_ugraph(const UGraph& g, int indent) {
  ordered_json doc;
  doc["vertices"] = g.vertices();
  doc["edges"] = ordered_json::array();
  doc["switches"] = ordered_json::array();
  for (const auto& c : g.connections()) {
    ordered_json item;
    item["id"] = c.id;
    item["ends"] = {g.vertex_name(c.u), g.vertex_name(c.v)};
    item["weight"] = c.weight;
    if (c.is_switch()) {
      item["prob"] = c.prob;
      doc["switches"].push_back(std::move(item));
    } else {
      doc["edges"].push_back(std::move(item));
    }
  }
  doc["start"] = g.vertex_name(g.start());
  doc["goal"] = g.vertex_name(g.goal());
  return doc.dump(indent);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string instance_digest(const UGraph& g) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(serialize_ugraph(g))));
  return buf;
}

}  // namespace uplan
