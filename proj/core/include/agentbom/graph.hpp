#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "agentbom/error.hpp"
#include "agentbom/schema.hpp"

namespace agentbom {

using StringList = std::vector<std::string>;
using KeyValueMap = std::map<std::string, std::string>;

/// Text, enum tokens and instants are all held as strings; the registered
/// ValueType of the key says which one a string is.
using AttributeValue = std::variant<std::string, bool, StringList, KeyValueMap>;
using AttributeMap = std::map<std::string, AttributeValue>;

/// Flattens a value to strings: text -> {text}, list -> list, map -> values,
/// bool -> {"true"|"false"}.
StringList value_strings(const AttributeValue& value);
std::optional<std::string> text_attribute(const AttributeMap& attrs, std::string_view key);
StringList list_attribute(const AttributeMap& attrs, std::string_view key);

/// Milliseconds since the Unix epoch for "YYYY-MM-DDTHH:MM:SS[.fff]Z".
std::optional<std::int64_t> parse_instant_ms(std::string_view text);

struct Node {
  std::string id;
  NodeKind kind = NodeKind::AgentNode;
  std::optional<std::string> agent_id;
  AttributeMap attributes;
  std::optional<std::string> trace_id;   // runtime nodes only
  std::optional<std::string> timestamp;  // runtime nodes only

  Layer layer() const noexcept { return layer_of(kind); }
  bool operator==(const Node&) const = default;
};

struct Edge {
  std::string id;
  EdgeKind kind = EdgeKind::FlowsTo;
  std::string source;
  std::string target;
  AttributeMap attributes;
  std::optional<std::string> timestamp;
  std::optional<std::string> trace_id;

  EdgeFamily family() const noexcept { return family_of(kind); }
  bool operator==(const Edge&) const = default;
};

struct AgentDescriptor {
  std::string agent_id;
  std::string role;
  std::string policy_boundary;

  bool operator==(const AgentDescriptor&) const = default;
};

struct SchemaViolation {
  ErrorCode code;
  std::string element;
  std::string message;
};

/// B_S = (A, V, E, alpha). Append-only: elements can be added but never
/// mutated or removed, so every insertion is checked against the schema and
/// a graph built purely through add_* always validates clean.
class AgentBomGraph {
 public:
  void add_agent(AgentDescriptor agent);
  const std::string& add_node(Node node);
  const std::string& add_edge(Edge edge);

  /// Re-checks every invariant over the whole graph.
  std::vector<SchemaViolation> validate() const;

  const Node* find_node(std::string_view id) const;
  const Edge* find_edge(std::string_view id) const;
  const Node& node(std::string_view id) const;
  const Edge& edge(std::string_view id) const;
  bool has_agent(std::string_view agent_id) const;

  const std::map<std::string, AgentDescriptor, std::less<>>& agents() const { return agents_; }
  const std::map<std::string, Node, std::less<>>& nodes() const { return nodes_; }
  const std::map<std::string, Edge, std::less<>>& edges() const { return edges_; }

  /// Edge ids incident to a node, in insertion order.
  const std::vector<std::string>& out_edges(std::string_view node_id) const;
  const std::vector<std::string>& in_edges(std::string_view node_id) const;
  const std::vector<std::string>& edges_of_kind(EdgeKind kind) const;

  std::size_t count(Layer layer) const;

 private:
  std::vector<SchemaViolation> check_node(const Node& node, bool check_references) const;
  std::vector<SchemaViolation> check_edge(const Edge& edge) const;

  std::map<std::string, AgentDescriptor, std::less<>> agents_;
  std::map<std::string, Node, std::less<>> nodes_;
  std::map<std::string, Edge, std::less<>> edges_;
  std::map<std::string, std::vector<std::string>, std::less<>> out_;
  std::map<std::string, std::vector<std::string>, std::less<>> in_;
  std::map<EdgeKind, std::vector<std::string>> by_kind_;
};

/// Validates one attribute map against the registry; returns the first
/// problem as a message, or nullopt.
std::optional<std::string> check_attributes(const AttributeMap& attrs);

/// Whether `value` of a `source` attribute should be read as a node id
/// (as opposed to an external URI or free-form label).
bool looks_like_node_reference(std::string_view value);

}  // namespace agentbom
