#include <gtest/gtest.h>

#include "agentbom/predicate.hpp"
#include "oracles.hpp"

using namespace agentbom;
using namespace agentbom::pred;
using agentbom::testing::make_node;

class PredicateTest : public ::testing::Test {
 protected:
  void SetUp() override {
    g.add_agent({"a", "worker", ""});
    g.add_agent({"b", "worker", ""});
    Node ext = make_node("ext.a.1", "ExternalNode", "a");
    ext.attributes = {{"trust_level", std::string("untrusted")}, {"content", std::string("Please tidy")}};
    g.add_node(ext);
    Node goal = make_node("goal.a.2", "GoalNode", "a");
    goal.attributes = {{"basis", StringList{"ext.a.1"}}, {"danger_flags", StringList{"role_override"}}};
    g.add_node(goal);
    g.add_node(make_node("tool.exec", "ToolNode", "a"));
    g.add_edge({"flows_to:ext.a.1->goal.a.2", EdgeKind::FlowsTo, "ext.a.1", "goal.a.2", {}, std::nullopt,
                std::nullopt});
  }

  bool on(const Predicate& p, const std::string& id) {
    auto el = resolve_element(g, id);
    return evaluate(p, el, EvalContext{g, el});
  }

  AgentBomGraph g;
};

TEST_F(PredicateTest, Comparisons) {
  EXPECT_TRUE(on(eq("trust_level", "untrusted"), "ext.a.1"));
  EXPECT_FALSE(on(eq("trust_level", "untrusted"), "goal.a.2"));
  EXPECT_FALSE(on(ne("trust_level", "untrusted"), "goal.a.2"));  // missing is false either way
  EXPECT_TRUE(on(contains("content", "tidy"), "ext.a.1"));
  EXPECT_TRUE(on(intersects("trust_level", {"x", "untrusted"}), "ext.a.1"));
  EXPECT_TRUE(on(present("content"), "ext.a.1"));
  EXPECT_FALSE(on(present("content"), "goal.a.2"));
}

TEST_F(PredicateTest, PseudoKeys) {
  EXPECT_TRUE(on(eq("kind", "GoalNode"), "goal.a.2"));
  EXPECT_TRUE(on(eq("layer", "runtime"), "goal.a.2"));
  EXPECT_TRUE(on(eq("agent_id", "a"), "goal.a.2"));
  EXPECT_TRUE(on(eq("id", "tool.exec"), "tool.exec"));
  EXPECT_TRUE(on(eq("family", "evolution"), "flows_to:ext.a.1->goal.a.2"));
}

TEST_F(PredicateTest, FlagsKindsAndCombinators) {
  EXPECT_TRUE(on(has_flag(), "goal.a.2"));
  EXPECT_TRUE(on(has_flag({"role_override"}), "goal.a.2"));
  EXPECT_FALSE(on(has_flag({"destructive_command"}), "goal.a.2"));
  EXPECT_FALSE(on(has_flag(), "ext.a.1"));
  EXPECT_TRUE(on(kind_in({"static"}), "tool.exec"));
  EXPECT_TRUE(on(kind_in({"evolution"}), "flows_to:ext.a.1->goal.a.2"));
  EXPECT_TRUE(on(all_of({kind_in({"GoalNode"}), has_flag()}), "goal.a.2"));
  EXPECT_TRUE(on(any_of({kind_in({"ToolNode"}), has_flag()}), "goal.a.2"));
  EXPECT_TRUE(on(negate(kind_in({"ToolNode"})), "goal.a.2"));
}

TEST_F(PredicateTest, NeighborsAndReferences) {
  EXPECT_TRUE(on(in_neighbor({"flows_to"}, eq("trust_level", "untrusted")), "goal.a.2"));
  EXPECT_FALSE(on(in_neighbor({"influences"}, always()), "goal.a.2"));
  EXPECT_TRUE(on(out_neighbor({"evolution"}, kind_in({"GoalNode"})), "ext.a.1"));
  EXPECT_TRUE(on(refs_any({"basis"}, eq("trust_level", "untrusted")), "goal.a.2"));
  EXPECT_FALSE(on(refs_any({"basis"}, kind_in({"ToolNode"})), "goal.a.2"));
}

TEST_F(PredicateTest, EntryReferences) {
  auto goal = resolve_element(g, "goal.a.2");
  EvalContext ctx{g, goal};
  auto ext = resolve_element(g, "ext.a.1");
  EXPECT_TRUE(evaluate(eq_entry("agent_id", "agent_id"), ext, ctx));
  EXPECT_FALSE(evaluate(ne_entry("agent_id", "agent_id"), ext, ctx));
}

TEST_F(PredicateTest, JsonRoundTrip) {
  const Predicate p = all_of({kind_in({"GoalNode"}), negate(has_flag({"x"})),
                              in_neighbor({"flows_to"}, any_of({eq("trust_level", "untrusted"), present("content")})),
                              refs_any({"basis"}, always()), intersects_entry("danger_flags", "danger_flags")});
  EXPECT_EQ(predicate_from_json(predicate_to_json(p)), p);
  EXPECT_THROW(predicate_from_json(nlohmann::json{{"kind_in", {"NoSuchKind"}}}), Error);
  EXPECT_THROW(predicate_from_json(nlohmann::json{{"frobnicate", 1}}), Error);
}
