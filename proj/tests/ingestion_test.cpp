#include <gtest/gtest.h>

#include "agentbom/ingestion.hpp"
#include "agentbom/scenarios.hpp"
#include "agentbom/serialize.hpp"

using namespace agentbom;

namespace {

AgentDecl solo_agent() {
  AgentDecl a;
  a.agent_id = "bot";
  a.role = "helper";
  a.system_prompt = PromptDecl{"Be helpful.", {}};
  a.model = ModelDecl{"m1", "vendor"};
  a.tools.push_back({"exec", "{}", {"fs.write"}, {}});
  return a;
}

CapabilityManifest solo() { return {{solo_agent()}}; }

TraceEvent ev(std::string id, std::string agent, int second, EventType type, std::string content,
              StringList refs = {}, AttributeMap attrs = {}, std::string trace = "t1") {
  char ts[32];
  std::snprintf(ts, sizeof ts, "2026-05-01T09:00:%02dZ", second);
  return {std::move(id), std::move(trace), std::move(agent), ts, type, std::move(content), std::move(refs),
          std::move(attrs)};
}

std::size_t count_kind(const AgentBomGraph& g, EdgeKind k) { return g.edges_of_kind(k).size(); }

}  // namespace

TEST(Manifest, OneAgentOneToolCounts) {
  auto g = extract_static(solo(), DangerMatcher::default_pack());
  EXPECT_EQ(g.nodes().size(), 4u);  // agent, prompt, model, tool
  EXPECT_EQ(count_kind(g, EdgeKind::LoadsTool), 1u);
  EXPECT_EQ(count_kind(g, EdgeKind::HasPrompt), 1u);
  EXPECT_EQ(count_kind(g, EdgeKind::UsesModel), 1u);
  EXPECT_TRUE(g.find_node("tool.exec"));
  EXPECT_TRUE(g.find_node("agent.bot"));
}

TEST(Manifest, WeatherSkillCarriesFlagAndIntegrity) {
  auto fx = generate(ScenarioId::SupplyChainCodeExec, 7);
  auto g = extract_static(fx.manifest, DangerMatcher::default_pack());
  const auto& skill = g.node("skill.weather").attributes;
  EXPECT_EQ(list_attribute(skill, "danger_flags"), StringList{"exfiltration_endpoint"});
  EXPECT_EQ(text_attribute(skill, "integrity_status"), "unverified");
}

TEST(Manifest, EmptyAgentListRejected) {
  try {
    parse_manifest(R"({"agents": []})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ManifestParseError);
  }
  EXPECT_THROW(parse_manifest("{oops"), Error);
}

TEST(Manifest, JsonRoundTrip) {
  for (auto id : kAllScenarios) {
    auto fx = generate(id, 2);
    EXPECT_EQ(manifest_to_json(manifest_from_json(manifest_to_json(fx.manifest))), manifest_to_json(fx.manifest));
    EXPECT_EQ(parse_trace_jsonl(write_trace_jsonl(fx.events)), fx.events);
  }
}

TEST(Events, TwoEventChainFlowsTo) {
  auto g = assemble(solo(), {ev("bot.1", "bot", 1, EventType::ExternalInput, "hi"),
                             ev("bot.2", "bot", 2, EventType::GoalFormed, "greet", {"bot.1"})});
  EXPECT_TRUE(g.find_edge("flows_to:ext.bot.1->goal.bot.2"));
  EXPECT_EQ(list_attribute(g.node("goal.bot.2").attributes, "basis"), StringList{"ext.bot.1"});
}

TEST(Events, NonAdjacentStagesInfluence) {
  auto g = assemble(solo(), {ev("bot.1", "bot", 1, EventType::ExternalInput, "hi"),
                             ev("bot.2", "bot", 2, EventType::ReasoningStep, "think", {"bot.1"})});
  EXPECT_TRUE(g.find_edge("influences:ext.bot.1->rsn.bot.2"));
}

TEST(Events, DestructiveMemoryWriteFlagged) {
  auto g = assemble(solo(), {ev("bot.1", "bot", 1, EventType::MemoryWrite, "rm -rf ~/.openclaw/workspace/")});
  const auto& attrs = g.node("act.bot.1").attributes;
  EXPECT_EQ(list_attribute(attrs, "danger_flags"), StringList{"destructive_command"});
  EXPECT_EQ(text_attribute(attrs, "type"), "memory_write");
}

TEST(Events, RefToLaterEventIsOutOfOrder) {
  try {
    assemble(solo(), {ev("bot.1", "bot", 1, EventType::GoalFormed, "g", {"bot.2"}),
                      ev("bot.2", "bot", 2, EventType::ExternalInput, "hi")});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OutOfOrderTimestamp);
  }
}

TEST(Events, DecreasingTimestampsAndBadRefs) {
  EXPECT_THROW(assemble(solo(), {ev("bot.1", "bot", 5, EventType::ExternalInput, "a"),
                                 ev("bot.2", "bot", 4, EventType::GoalFormed, "b")}),
               Error);
  try {
    assemble(solo(), {ev("bot.1", "bot", 1, EventType::GoalFormed, "g", {"ghost.9"})});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnresolvedRef);
  }
  EXPECT_THROW(assemble(solo(), {ev("bot.1", "bot", 1, EventType::ExternalInput, "a"),
                                 ev("bot.1", "bot", 2, EventType::ExternalInput, "b")}),
               Error);
}

TEST(Events, EmptyTraceGivesStaticOnlyGraph) {
  auto g = assemble(solo(), {});
  EXPECT_EQ(g.count(Layer::Runtime), 0u);
  EXPECT_TRUE(g.validate().empty());
}

TEST(Binding, ToolInvocationSelectsAndInvokes) {
  auto g = assemble(solo(), {ev("bot.1", "bot", 1, EventType::DecisionMade, "use exec"),
                             ev("bot.2", "bot", 2, EventType::ToolInvocation, "run", {"bot.1"},
                                {{"tool_name", std::string("exec")}})});
  EXPECT_TRUE(g.find_edge("selects:dec.bot.1->tool.exec"));
  EXPECT_TRUE(g.find_edge("invokes:act.bot.2->tool.exec"));
}

TEST(Binding, UndeclaredToolRejected) {
  EXPECT_THROW(assemble(solo(), {ev("bot.1", "bot", 1, EventType::ToolInvocation, "run", {},
                                    {{"tool_name", std::string("nuke")}})}),
               Error);
}

namespace {

CapabilityManifest pair_of_agents() {
  AgentDecl a = solo_agent();
  AgentDecl b = solo_agent();
  b.agent_id = "peer";
  return {{a, b}};
}

}  // namespace

TEST(Binding, MessagePairCarriesAuthentication) {
  auto g = assemble(pair_of_agents(),
                    {ev("bot.1", "bot", 1, EventType::MessageSent, "do it", {},
                        {{"message_id", std::string("m1")}, {"target_agent", std::string("peer")}}),
                     ev("peer.1", "peer", 2, EventType::MessageReceived, "do it", {"bot.1"},
                        {{"message_id", std::string("m1")},
                         {"authentication_status", std::string("unauthenticated")}})});
  const Edge* e = g.find_edge("sends_to:act.bot.1->ext.peer.1");
  ASSERT_TRUE(e);
  EXPECT_EQ(text_attribute(e->attributes, "authentication_status"), "unauthenticated");
  EXPECT_EQ(text_attribute(e->attributes, "message_id"), "m1");
}

// Three messages, each either delivered or not: every send yields exactly
// one sends_to edge, and each undelivered one ends at its own dropped sink.
TEST(Binding, ExhaustivePairingOfThreeMessages) {
  for (int mask = 0; mask < 8; ++mask) {
    std::vector<TraceEvent> events;
    int second = 0;
    for (int m = 0; m < 3; ++m) {
      const std::string mid = "m" + std::to_string(m);
      events.push_back(ev("bot." + std::to_string(m + 1), "bot", ++second, EventType::MessageSent,
                          "part " + std::to_string(m), {},
                          {{"message_id", mid}, {"target_agent", std::string("peer")}}));
    }
    int delivered = 0;
    for (int m = 0; m < 3; ++m) {
      if (!(mask & (1 << m))) continue;
      ++delivered;
      events.push_back(ev("peer." + std::to_string(delivered), "peer", ++second, EventType::MessageReceived,
                          "part " + std::to_string(m), {}, {{"message_id", "m" + std::to_string(m)}}));
    }
    const int dropped = 3 - delivered;
    auto pairing = pair_messages(events);
    EXPECT_EQ(pairing.pairs.size(), static_cast<std::size_t>(delivered));
    EXPECT_EQ(pairing.unmatched_sent.size(), static_cast<std::size_t>(dropped));
    EXPECT_TRUE(pairing.unmatched_received.empty());

    auto g = assemble(pair_of_agents(), events);
    EXPECT_EQ(count_kind(g, EdgeKind::SendsTo), 3u) << mask;
    int sinks = 0;
    int dropped_edges = 0;
    for (const auto& [id, n] : g.nodes()) sinks += id.rfind("ext.sink.", 0) == 0;
    for (const auto& id : g.edges_of_kind(EdgeKind::SendsTo)) {
      dropped_edges += text_attribute(g.edge(id).attributes, "propagation_status") == "dropped";
    }
    EXPECT_EQ(sinks, dropped) << mask;
    EXPECT_EQ(dropped_edges, dropped) << mask;
  }
}

TEST(Binding, MemoryPoisoningWritesThenReadsSameStore) {
  auto fx = generate(ScenarioId::MemoryPoisoningToolMisuse, 7);
  auto g = assemble(fx.manifest, fx.events);
  const auto& writes = g.edges_of_kind(EdgeKind::WritesTo);
  const auto& reads = g.edges_of_kind(EdgeKind::ReadsFrom);
  ASSERT_EQ(writes.size(), 1u);
  const Edge& w = g.edge(writes[0]);
  const Edge* r = nullptr;
  for (const auto& id : reads) {
    if (g.edge(id).target == w.target) r = &g.edge(id);
  }
  ASSERT_TRUE(r);
  EXPECT_EQ(w.target, "ltm.workspace_notes");
  EXPECT_LT(*g.node(w.source).timestamp, *g.node(r->source).timestamp);
  EXPECT_NE(g.node(w.source).trace_id, g.node(r->source).trace_id);
}

TEST(Binding, BindingEdgesShareTraceWithRuntimeEndpoint) {
  for (auto id : kAllScenarios) {
    auto fx = generate(id, 7);
    auto g = assemble(fx.manifest, fx.events);
    for (const auto& [eid, e] : g.edges()) {
      if (e.family() != EdgeFamily::Binding) continue;
      const Node& s = g.node(e.source);
      const Node& t = g.node(e.target);
      const Node& runtime = s.layer() == Layer::Runtime ? s : t;
      EXPECT_EQ(e.trace_id, runtime.trace_id) << eid;
    }
  }
}

// The matcher, run directly over every string in the baseline fixture, finds
// nothing; so the assembled graph must carry no flags either.
TEST(Binding, BaselineCarriesNoDangerFlags) {
  auto fx = generate(ScenarioId::BenignBaseline, 7);
  auto matcher = DangerMatcher::default_pack();
  for (const auto& e : fx.events) {
    AttributeMap attrs = e.attrs;
    attrs["content"] = e.content;
    EXPECT_TRUE(matcher.scan(attrs).empty()) << e.event_id;
  }
  for (const auto& a : fx.manifest.agents) {
    if (a.system_prompt) {
      EXPECT_TRUE(matcher.scan({{"content", a.system_prompt->content}}).empty());
    }
    for (const auto& s : a.skills) {
      EXPECT_TRUE(matcher.scan({{"implementation_summary", s.implementation_summary}}).empty());
    }
  }
  auto g = assemble(fx.manifest, fx.events);
  for (const auto& [id, n] : g.nodes()) EXPECT_FALSE(n.attributes.count("danger_flags")) << id;
  for (const auto& [id, e] : g.edges()) EXPECT_FALSE(e.attributes.count("danger_flags")) << id;
}

TEST(Assembly, DeterministicAcrossRuns) {
  for (auto id : kAllScenarios) {
    auto fx = generate(id, 21);
    EXPECT_EQ(serialize_graph(assemble(fx.manifest, fx.events)), serialize_graph(assemble(fx.manifest, fx.events)));
  }
}
