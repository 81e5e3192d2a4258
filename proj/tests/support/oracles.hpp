#pragma once

// Brute-force reference implementations used as test oracles. Nothing here
// calls the code under test for the property being checked.

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "agentbom/graph.hpp"
#include "agentbom/traversal.hpp"

namespace agentbom::testing {

// Endpoint table ---------------------------------------------------------

using Triple = std::tuple<std::string, std::string, std::string>;  // edge kind, source kind, target kind

/// Every permitted (edge, source, target) triple, expanded from the
/// edge-schema table by hand.
const std::set<Triple>& endpoint_table();

/// A minimal well-formed node of `kind` owned by `agent`.
Node make_node(const std::string& id, const std::string& kind, const std::string& agent);

// Random graphs and path enumeration ---------------------------------------

struct TerminalTest {
  enum class Type { Any, KindIn, KindNotIn, Untrusted } type = Type::Any;
  std::set<std::string> kinds;

  bool holds(const Node& n) const;
  Predicate to_predicate() const;
};

struct RandomSpec {
  Direction direction = Direction::Backward;
  std::set<std::string> edge_kinds;
  std::set<std::string> node_kinds;  // empty = any
  TerminalTest terminal;
  int max_depth = 4;
  bool cross_agent = false;
  bool include_start = false;
  bool temporal = false;

  PathSpec to_path_spec() const;
};

/// Up to `max_nodes` nodes over a handful of agents, with random valid edges
/// (cycles and parallel edges included).
AgentBomGraph random_graph(std::mt19937_64& rng, int max_nodes);
RandomSpec random_spec(std::mt19937_64& rng, const AgentBomGraph& graph);
/// A random node or edge id of the graph.
std::string random_start(std::mt19937_64& rng, const AgentBomGraph& graph);

/// Exhaustive breadth-first enumeration of every simple path satisfying the
/// spec, each listed upstream-first, sorted by (depth, elements).
std::vector<std::vector<std::string>> enumerate_paths(const AgentBomGraph& graph, const std::string& start,
                                                      const RandomSpec& spec);

// DOT -----------------------------------------------------------------------

struct DotGraph {
  std::string name;
  std::map<std::string, std::map<std::string, std::string>> nodes;
  struct Edge {
    std::string from, to;
    std::map<std::string, std::string> attrs;
  };
  std::vector<Edge> edges;
};

/// Recursive-descent parser for the digraph subset of the DOT grammar
/// (statements, attribute lists, quoted and bare ids). Throws
/// std::runtime_error on malformed input.
DotGraph parse_dot(const std::string& text);

}  // namespace agentbom::testing
