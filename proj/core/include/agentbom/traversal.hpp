#pragma once

// Bounded simple-path search in either direction of information flow.
// Edges are followed in the direction content moves, which is source ->
// target for every kind except reads_from (see flow_reversed).

#include <string>
#include <string_view>
#include <vector>

#include "agentbom/graph.hpp"
#include "agentbom/predicate.hpp"

namespace agentbom {

enum class Direction { Backward, Forward };

std::string_view to_string(Direction d) noexcept;

struct PathSpec {
  Direction direction = Direction::Backward;
  /// Edge kinds, family names or "AgentPropagationEdge".
  StringList allowed_edge_kinds;
  /// Kind or layer tokens restricting intermediate nodes; empty = any.
  StringList allowed_node_kinds;
  Predicate terminal_predicate;
  int max_depth = 32;
  /// Propagation-family edges are skipped unless set.
  bool cross_agent = false;
  /// Also report the zero-length path when the start node itself is terminal.
  bool include_start = false;
  /// Node timestamps must be monotone along the flow.
  bool temporal = false;

  bool operator==(const PathSpec&) const = default;
};

/// Throws InvalidPathSpec when max_depth < 1 or an edge/node token is unknown.
void check_path_spec(const PathSpec& spec);

/// Elements in flow order (upstream first): node, edge, node, ... For a
/// backward path the origin is the node the search found and the last
/// element is the start; for a forward path it is the other way round.
struct AuditPath {
  Direction direction = Direction::Backward;
  std::vector<std::string> elements;

  const std::string& origin() const { return elements.front(); }
  const std::string& terminus() const { return elements.back(); }
  /// The node the search reached (origin when backward, terminus when forward).
  const std::string& reached() const {
    return direction == Direction::Backward ? origin() : terminus();
  }
  std::size_t depth() const { return elements.size() / 2; }

  bool operator==(const AuditPath&) const = default;
};

/// Ordering used for results: depth, then element ids lexicographically.
bool path_less(const AuditPath& a, const AuditPath& b);

/// All simple paths from `start` (node or edge id) satisfying `spec`. An edge
/// start begins at its upstream endpoint for backward and its downstream
/// endpoint for forward searches. `entry` is what "entry.<key>" refers to in
/// the terminal predicate; it defaults to the start element.
std::vector<AuditPath> trace(const AgentBomGraph& graph, std::string_view start, const PathSpec& spec);
std::vector<AuditPath> trace(const AgentBomGraph& graph, std::string_view start, const PathSpec& spec,
                             const Element& entry);

/// Induced graph over the union of path elements plus `extra` element ids.
/// Node references (basis, parameter_source, source) to nodes outside the
/// subgraph are dropped so the result validates on its own.
AgentBomGraph subgraph(const AgentBomGraph& graph, const std::vector<AuditPath>& paths,
                       const std::vector<std::string>& extra = {});

}  // namespace agentbom
