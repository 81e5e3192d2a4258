#include <gtest/gtest.h>

#include "agentbom/graph.hpp"
#include "agentbom/scenarios.hpp"
#include "oracles.hpp"

using namespace agentbom;
using agentbom::testing::endpoint_table;
using agentbom::testing::make_node;

namespace {

Edge edge(std::string id, EdgeKind kind, std::string s, std::string t) {
  return {std::move(id), kind, std::move(s), std::move(t), {}, std::nullopt, std::nullopt};
}

AgentBomGraph two_agents() {
  AgentBomGraph g;
  g.add_agent({"a", "worker", ""});
  g.add_agent({"b", "worker", ""});
  return g;
}

}  // namespace

TEST(Graph, InvokesFromActionToToolAccepted) {
  auto g = two_agents();
  g.add_node(make_node("act.1", "ActionNode", "a"));
  g.add_node(make_node("tool.exec", "ToolNode", "a"));
  EXPECT_NO_THROW(g.add_edge(edge("i", EdgeKind::Invokes, "act.1", "tool.exec")));
  EXPECT_EQ(g.out_edges("act.1").size(), 1u);
  EXPECT_EQ(g.in_edges("tool.exec").size(), 1u);
}

TEST(Graph, InvokesFromContextRejected) {
  auto g = two_agents();
  g.add_node(make_node("ctx.1", "ContextNode", "a"));
  g.add_node(make_node("tool.exec", "ToolNode", "a"));
  try {
    g.add_edge(edge("i", EdgeKind::Invokes, "ctx.1", "tool.exec"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EndpointKindViolation);
  }
}

TEST(Graph, DanglingEndpointRejected) {
  auto g = two_agents();
  g.add_node(make_node("act.1", "ActionNode", "a"));
  try {
    g.add_edge(edge("i", EdgeKind::Invokes, "act.1", "tool.none"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DanglingEndpoint);
  }
}

TEST(Graph, DuplicateIdsRejected) {
  auto g = two_agents();
  g.add_node(make_node("n", "GoalNode", "a"));
  EXPECT_THROW(g.add_node(make_node("n", "GoalNode", "a")), Error);
  EXPECT_THROW(g.add_agent({"a", "", ""}), Error);
}

TEST(Graph, UnknownAgentRejected) {
  auto g = two_agents();
  EXPECT_THROW(g.add_node(make_node("n", "GoalNode", "zed")), Error);
}

// Six nodes, two per agent plus two agent-less ones, and every
// (source, target, propagation kind) combination. A propagation edge is legal
// iff the endpoint kinds fit and either the agents differ or one side is
// shared.
TEST(Graph, PropagationEdgesNeedTwoAgentsOrSharedObject) {
  struct Spot {
    std::string id, kind;
    std::optional<std::string> agent;
  };
  const std::vector<Spot> spots = {
      {"out.a", "OutputNode", "a"},   {"ctx.a", "ContextNode", "a"},     {"act.b", "ActionNode", "b"},
      {"ext.b", "ExternalNode", "b"}, {"agent.x", "AgentNode", std::nullopt}, {"ctx.s", "ContextNode", "a"},
  };
  const std::vector<EdgeKind> kinds = {EdgeKind::SendsTo, EdgeKind::DelegatesTo, EdgeKind::RespondsTo,
                                       EdgeKind::SharesContextWith, EdgeKind::SharesMemoryWith};
  int checked = 0;
  for (const auto& s : spots) {
    for (const auto& t : spots) {
      if (s.id == t.id) continue;
      for (auto k : kinds) {
        auto g = two_agents();
        for (const auto& p : spots) {
          Node n = make_node(p.id, p.kind, "a");
          n.agent_id = p.agent;
          if (p.id == "ctx.s") n.attributes["shared_state"] = std::string("blackboard");
          g.add_node(n);
        }
        const bool fits = endpoint_table().count({std::string(to_string(k)), s.kind, t.kind}) > 0;
        const bool shared = !s.agent || !t.agent || s.id == "ctx.s" || t.id == "ctx.s";
        const bool expected = fits && (shared || *s.agent != *t.agent);
        bool accepted = true;
        try {
          g.add_edge(edge("p", k, s.id, t.id));
        } catch (const Error& e) {
          accepted = false;
          EXPECT_EQ(e.code(), ErrorCode::EndpointKindViolation);
        }
        EXPECT_EQ(accepted, expected) << to_string(k) << " " << s.id << " -> " << t.id;
        ++checked;
      }
    }
  }
  EXPECT_EQ(checked, 150);
}

TEST(Graph, SameAgentSendsToRejected) {
  auto g = two_agents();
  g.add_node(make_node("out.a", "OutputNode", "a"));
  g.add_node(make_node("ctx.a", "ContextNode", "a"));
  try {
    g.add_edge(edge("s", EdgeKind::SendsTo, "out.a", "ctx.a"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EndpointKindViolation);
  }
}

TEST(Graph, EmptyGraphValidates) { EXPECT_TRUE(AgentBomGraph{}.validate().empty()); }

TEST(Graph, MissingBasisIsUnresolvedReference) {
  auto g = two_agents();
  Node n = make_node("goal.1", "GoalNode", "a");
  n.attributes["basis"] = StringList{"missing.node"};
  try {
    g.add_node(n);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnresolvedReference);
  }
}

TEST(Graph, ScenarioGraphsValidateClean) {
  for (auto id : kAllScenarios) {
    auto fx = generate(id, 7);
    auto g = assemble(fx.manifest, fx.events);
    EXPECT_TRUE(g.validate().empty()) << to_string(id);
  }
}

TEST(Graph, InstantParsing) {
  EXPECT_EQ(parse_instant_ms("1970-01-01T00:00:01Z"), 1000);
  EXPECT_EQ(parse_instant_ms("1970-01-01T00:00:00.250Z"), 250);
  EXPECT_FALSE(parse_instant_ms("yesterday"));
  EXPECT_FALSE(parse_instant_ms("2026-13-01T00:00:00Z"));
}
