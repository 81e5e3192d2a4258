#pragma once

// Graphviz DOT rendering of a graph, optionally highlighting one finding.

#include <string>

#include "agentbom/graph.hpp"
#include "agentbom/rules.hpp"

namespace agentbom {

/// Static nodes are boxes, runtime nodes ellipses, auxiliary nodes diamonds.
/// Propagation edges are bold and dashed. When `highlight` is given, its
/// entry and every element on its paths are drawn red and thick. Output is
/// ordered by id, so equal graphs render to equal bytes.
std::string to_dot(const AgentBomGraph& graph, const Finding* highlight = nullptr);

/// Quotes an id for DOT, escaping backslashes and double quotes.
std::string dot_quote(std::string_view text);

}  // namespace agentbom
