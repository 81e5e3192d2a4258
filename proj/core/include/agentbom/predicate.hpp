#pragma once

// Attribute predicates evaluated against a single node or edge. Evaluation
// is total: a missing attribute makes a comparison false, never an error.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "agentbom/graph.hpp"

namespace agentbom {

/// A node or an edge of a graph; exactly one pointer is set for a valid
/// element.
struct Element {
  const Node* node = nullptr;
  const Edge* edge = nullptr;

  bool valid() const noexcept { return node || edge; }
  const std::string& id() const;
  const AttributeMap& attributes() const;
};

Element resolve_element(const AgentBomGraph& graph, std::string_view id);

struct Predicate {
  enum class Op { True, Compare, HasFlag, KindIn, Neighbor, RefsAny, And, Or, Not };
  enum class Cmp { Eq, Ne, Contains, Intersects, Present };

  Op op = Op::True;
  // Compare
  std::string key;
  Cmp cmp = Cmp::Eq;
  StringList operand;
  std::optional<std::string> operand_ref;  // "entry.<key>"
  // HasFlag: flag names (empty = any flag); KindIn: kind/family/layer tokens;
  // Neighbor: edge-kind tokens; RefsAny: attribute keys holding node ids.
  StringList names;
  bool outgoing = false;  // Neighbor
  std::vector<Predicate> children;

  bool operator==(const Predicate&) const = default;
};

/// Evaluation context: the graph, and the rule's entry element so that
/// comparisons can refer to "entry.<key>".
struct EvalContext {
  const AgentBomGraph& graph;
  Element entry;
};

bool evaluate(const Predicate& p, const Element& element, const EvalContext& ctx);

/// The attribute (key, value) that made `p` true on `element`, for evidence
/// records. Falls back to ("kind", <kind>) when no attribute was consulted.
std::pair<std::string, std::string> explain(const Predicate& p, const Element& element,
                                            const EvalContext& ctx);

/// Values of `key` on an element: pseudo-keys id, kind, layer, family,
/// agent_id, trace_id, timestamp resolve to element fields; everything else
/// to the attribute map.
std::optional<StringList> lookup(const Element& element, std::string_view key);

nlohmann::json predicate_to_json(const Predicate& p);
Predicate predicate_from_json(const nlohmann::json& j);

namespace pred {

Predicate always();
Predicate eq(std::string key, std::string value);
Predicate ne(std::string key, std::string value);
Predicate contains(std::string key, std::string value);
Predicate intersects(std::string key, StringList values);
Predicate present(std::string key);
/// Compare `key` on the element with `entry_key` on the rule's entry.
Predicate eq_entry(std::string key, std::string entry_key);
Predicate ne_entry(std::string key, std::string entry_key);
Predicate intersects_entry(std::string key, std::string entry_key);
Predicate has_flag(StringList flags = {});
Predicate kind_in(StringList tokens);
Predicate in_neighbor(StringList edge_kinds, Predicate where);
Predicate out_neighbor(StringList edge_kinds, Predicate where);
Predicate refs_any(StringList keys, Predicate where);
Predicate all_of(std::vector<Predicate> children);
Predicate any_of(std::vector<Predicate> children);
Predicate negate(Predicate child);

}  // namespace pred

}  // namespace agentbom
