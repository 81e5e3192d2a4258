#include "agentbom/serialize.hpp"

#include <functional>
#include <set>

#include <openssl/evp.h>

namespace agentbom {

namespace {

Json node_to_json(const Node& n) {
  Json j;
  j["id"] = n.id;
  j["kind"] = to_string(n.kind);
  if (n.agent_id) j["agent_id"] = *n.agent_id;
  if (n.trace_id) j["trace_id"] = *n.trace_id;
  if (n.timestamp) j["timestamp"] = *n.timestamp;
  j["attributes"] = attributes_to_json(n.attributes);
  return j;
}

Json edge_to_json(const Edge& e) {
  Json j;
  j["id"] = e.id;
  j["kind"] = to_string(e.kind);
  j["source"] = e.source;
  j["target"] = e.target;
  if (e.trace_id) j["trace_id"] = *e.trace_id;
  if (e.timestamp) j["timestamp"] = *e.timestamp;
  j["attributes"] = attributes_to_json(e.attributes);
  return j;
}

std::optional<std::string> opt_string(const Json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  if (!j.at(key).is_string()) {
    throw Error(ErrorCode::GraphParseError, std::string("field '") + key + "' must be a string");
  }
  return j.at(key).get<std::string>();
}

std::string req_string(const Json& j, const char* key) {
  auto v = opt_string(j, key);
  if (!v) throw Error(ErrorCode::GraphParseError, std::string("missing field '") + key + "'");
  return *v;
}

Node node_from_json(const Json& j) {
  Node n;
  n.id = req_string(j, "id");
  auto kind_name = req_string(j, "kind");
  auto kind = parse_node_kind(kind_name);
  if (!kind) throw Error(ErrorCode::UnknownKind, "unknown node kind '" + kind_name + "'");
  n.kind = *kind;
  n.agent_id = opt_string(j, "agent_id");
  n.trace_id = opt_string(j, "trace_id");
  n.timestamp = opt_string(j, "timestamp");
  if (j.contains("attributes")) n.attributes = attributes_from_json(j.at("attributes"));
  return n;
}

Edge edge_from_json(const Json& j) {
  Edge e;
  e.id = req_string(j, "id");
  auto kind_name = req_string(j, "kind");
  auto kind = parse_edge_kind(kind_name);
  if (!kind) throw Error(ErrorCode::UnknownKind, "unknown edge kind '" + kind_name + "'");
  e.kind = *kind;
  e.source = req_string(j, "source");
  e.target = req_string(j, "target");
  e.trace_id = opt_string(j, "trace_id");
  e.timestamp = opt_string(j, "timestamp");
  if (j.contains("attributes")) e.attributes = attributes_from_json(j.at("attributes"));
  return e;
}

}  // namespace

AttributeValue attribute_from_json(const std::string& key, const Json& value) {
  const AttributeSpec* spec = find_attribute(key);
  if (!spec) {
    throw Error(ErrorCode::AttributeSchemaViolation, "unregistered attribute key '" + key + "'");
  }
  auto fail = [&] {
    return Error(ErrorCode::AttributeSchemaViolation,
                 "attribute '" + key + "' must be " + std::string(to_string(spec->type)));
  };
  switch (spec->type) {
    case ValueType::Text:
    case ValueType::Token:
    case ValueType::Instant:
      if (!value.is_string()) throw fail();
      return value.get<std::string>();
    case ValueType::Bool:
      if (!value.is_boolean()) throw fail();
      return value.get<bool>();
    case ValueType::StringList: {
      if (!value.is_array()) throw fail();
      StringList out;
      for (const auto& item : value) {
        if (!item.is_string()) throw fail();
        out.push_back(item.get<std::string>());
      }
      return out;
    }
    case ValueType::KeyValueMap: {
      if (!value.is_object()) throw fail();
      KeyValueMap out;
      for (const auto& [k, v] : value.items()) {
        if (!v.is_string()) throw fail();
        out.emplace(k, v.get<std::string>());
      }
      return out;
    }
  }
  throw fail();
}

Json attribute_to_json(const AttributeValue& value) {
  return std::visit([](const auto& v) { return Json(v); }, value);
}

AttributeMap attributes_from_json(const Json& object) {
  if (!object.is_object()) {
    throw Error(ErrorCode::AttributeSchemaViolation, "attributes must be a JSON object");
  }
  AttributeMap out;
  for (const auto& [k, v] : object.items()) out.emplace(k, attribute_from_json(k, v));
  return out;
}

Json attributes_to_json(const AttributeMap& attrs) {
  Json j = Json::object();
  for (const auto& [k, v] : attrs) j[k] = attribute_to_json(v);
  return j;
}

Json graph_to_json(const AgentBomGraph& graph) {
  Json agents = Json::array();
  for (const auto& [id, a] : graph.agents()) {
    agents.push_back({{"agent_id", a.agent_id}, {"role", a.role}, {"policy_boundary", a.policy_boundary}});
  }
  Json nodes = Json::array();
  for (const auto& [id, n] : graph.nodes()) nodes.push_back(node_to_json(n));
  Json edges = Json::array();
  for (const auto& [id, e] : graph.edges()) edges.push_back(edge_to_json(e));
  return {{"agents", agents}, {"nodes", nodes}, {"edges", edges}};
}

AgentBomGraph graph_from_json(const Json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::GraphParseError, "graph document must be an object");
  AgentBomGraph g;
  for (const auto& a : doc.value("agents", Json::array())) {
    g.add_agent({req_string(a, "agent_id"), a.value("role", ""), a.value("policy_boundary", "")});
  }
  std::map<std::string, Node> pending;
  for (const auto& j : doc.value("nodes", Json::array())) {
    Node n = node_from_json(j);
    if (pending.count(n.id)) throw Error(ErrorCode::DuplicateId, "node '" + n.id + "' repeated");
    auto id = n.id;
    pending.emplace(std::move(id), std::move(n));
  }
  // Insert referenced nodes first so add_node's reference check passes.
  std::set<std::string> visiting;
  std::function<void(const std::string&)> insert = [&](const std::string& id) {
    auto it = pending.find(id);
    if (it == pending.end()) return;
    if (!visiting.insert(id).second) {
      throw Error(ErrorCode::GraphParseError, "cyclic node references through '" + id + "'");
    }
    StringList refs = list_attribute(it->second.attributes, "basis");
    for (auto& r : list_attribute(it->second.attributes, "parameter_source")) refs.push_back(r);
    if (auto src = text_attribute(it->second.attributes, "source")) refs.push_back(*src);
    for (const auto& r : refs) {
      if (r != id && !g.find_node(r)) insert(r);
    }
    it = pending.find(id);
    if (it != pending.end()) {
      Node n = std::move(it->second);
      pending.erase(it);
      g.add_node(std::move(n));
    }
    visiting.erase(id);
  };
  while (!pending.empty()) insert(pending.begin()->first);
  for (const auto& j : doc.value("edges", Json::array())) g.add_edge(edge_from_json(j));
  return g;
}

std::string serialize_graph(const AgentBomGraph& graph) {
  return graph_to_json(graph).dump(2) + "\n";
}

AgentBomGraph parse_graph(std::string_view text) {
  Json doc = Json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorCode::GraphParseError, "graph file is not valid JSON");
  return graph_from_json(doc);
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

std::string graph_digest(const AgentBomGraph& graph) {
  return sha256_hex(graph_to_json(graph).dump());
}

}  // namespace agentbom
