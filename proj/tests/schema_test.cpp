#include <random>

#include <gtest/gtest.h>

#include "agentbom/graph.hpp"
#include "agentbom/schema.hpp"
#include "oracles.hpp"

using namespace agentbom;
using agentbom::testing::endpoint_table;
using agentbom::testing::make_node;

TEST(Schema, KindNamesRoundTrip) {
  for (auto k : kAllNodeKinds) EXPECT_EQ(parse_node_kind(to_string(k)), k);
  for (auto k : kAllEdgeKinds) EXPECT_EQ(parse_edge_kind(to_string(k)), k);
  EXPECT_FALSE(parse_node_kind("MysteryNode"));
  EXPECT_FALSE(parse_edge_kind("teleports_to"));
}

TEST(Schema, EveryKindHasOneLayer) {
  int counts[3] = {0, 0, 0};
  for (auto k : kAllNodeKinds) ++counts[static_cast<int>(layer_of(k))];
  EXPECT_EQ(counts[static_cast<int>(Layer::Static)], 7);
  EXPECT_EQ(counts[static_cast<int>(Layer::Runtime)], 8);
  EXPECT_EQ(counts[static_cast<int>(Layer::Auxiliary)], 2);
}

TEST(Schema, FamilyAliasesExpand) {
  EXPECT_EQ(expand_edge_kinds("AgentPropagationEdge").size(), 5u);
  EXPECT_EQ(expand_edge_kinds("propagation"), expand_edge_kinds("AgentPropagationEdge"));
  EXPECT_EQ(expand_edge_kinds("invokes"), std::vector<EdgeKind>{EdgeKind::Invokes});
  EXPECT_TRUE(expand_edge_kinds("nonsense").empty());
}

TEST(Schema, MinimalToolNodeAccepted) {
  AgentBomGraph g;
  Node n;
  n.id = "tool.exec";
  n.kind = NodeKind::ToolNode;
  n.attributes = {{"tool_name", std::string("exec")}, {"permission_scope", StringList{"fs.write"}}};
  EXPECT_EQ(g.add_node(n), "tool.exec");
}

TEST(Schema, RuntimeNodeNeedsTraceId) {
  AgentBomGraph g;
  g.add_agent({"a", "worker", ""});
  Node n = make_node("rsn.a.1", "ReasoningNode", "a");
  n.trace_id.reset();
  try {
    g.add_node(n);
    FAIL() << "accepted a runtime node without trace_id";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingTraceId);
  }
}

TEST(Schema, TrustLevelOutsideValueSpaceRejected) {
  AgentBomGraph g;
  Node n;
  n.id = "prompt.a";
  n.kind = NodeKind::PromptNode;
  n.attributes = {{"trust_level", std::string("very_trusted")}};
  try {
    g.add_node(n);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AttributeSchemaViolation);
  }
}

TEST(Schema, UnregisteredAttributeRejected) {
  AgentBomGraph g;
  Node n;
  n.id = "tool.x";
  n.kind = NodeKind::ToolNode;
  n.attributes = {{"colour", std::string("blue")}};
  EXPECT_THROW(g.add_node(n), Error);
}

TEST(Schema, EndpointPredicateMatchesTableExhaustively) {
  const auto& table = endpoint_table();
  for (auto e : kAllEdgeKinds) {
    for (auto s : kAllNodeKinds) {
      for (auto t : kAllNodeKinds) {
        const bool expected = table.count({std::string(to_string(e)), std::string(to_string(s)),
                                           std::string(to_string(t))}) > 0;
        EXPECT_EQ(endpoint_allowed(e, s, t), expected)
            << to_string(e) << " " << to_string(s) << " -> " << to_string(t);
      }
    }
  }
}

// Random triples pushed through add_edge on a live graph: accepted exactly
// when the triple is in the table.
TEST(Schema, FuzzedTriplesAgreeWithTable) {
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<std::size_t> nk(0, kAllNodeKinds.size() - 1);
  std::uniform_int_distribution<std::size_t> ek(0, kAllEdgeKinds.size() - 1);
  int disagreements = 0;
  for (int i = 0; i < 2000; ++i) {
    const auto s = to_string(kAllNodeKinds[nk(rng)]);
    const auto t = to_string(kAllNodeKinds[nk(rng)]);
    const auto e = to_string(kAllEdgeKinds[ek(rng)]);
    AgentBomGraph g;
    g.add_agent({"a", "", ""});
    g.add_agent({"b", "", ""});
    g.add_node(make_node("s", std::string(s), "a"));
    g.add_node(make_node("t", std::string(t), "b"));
    bool accepted = true;
    try {
      g.add_edge({"x", *parse_edge_kind(e), "s", "t", {}, std::nullopt, std::nullopt});
    } catch (const Error& err) {
      accepted = false;
      EXPECT_EQ(err.code(), ErrorCode::EndpointKindViolation);
    }
    if (accepted != (endpoint_table().count({std::string(e), std::string(s), std::string(t)}) > 0)) ++disagreements;
  }
  EXPECT_EQ(disagreements, 0);
}
