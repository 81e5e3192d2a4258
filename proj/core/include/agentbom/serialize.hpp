#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "agentbom/graph.hpp"

namespace agentbom {

using Json = nlohmann::json;

/// Converts a JSON value to an AttributeValue using the registered type of
/// `key`. Throws Error(AttributeSchemaViolation) for unregistered keys or
/// mistyped values.
AttributeValue attribute_from_json(const std::string& key, const Json& value);
Json attribute_to_json(const AttributeValue& value);
AttributeMap attributes_from_json(const Json& object);
Json attributes_to_json(const AttributeMap& attrs);

/// {agents:[...], nodes:[...], edges:[...]}, each array sorted by id.
Json graph_to_json(const AgentBomGraph& graph);
/// Rebuilds a graph through add_agent/add_node/add_edge, so the result is
/// schema-checked. Nodes are inserted after the nodes they reference.
AgentBomGraph graph_from_json(const Json& doc);

/// Canonical text form: two-space indented JSON with a trailing newline.
std::string serialize_graph(const AgentBomGraph& graph);
AgentBomGraph parse_graph(std::string_view text);

/// Hex SHA-256 over the compact canonical JSON.
std::string graph_digest(const AgentBomGraph& graph);
std::string sha256_hex(std::string_view data);

}  // namespace agentbom
