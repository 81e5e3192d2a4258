#include "agentbom/rules.hpp"

namespace agentbom {

namespace {

using namespace pred;

Predicate untrusted() {
  return any_of({eq("trust_level", "untrusted"), eq("integrity_status", "invalid"),
                 intersects("authentication_status", {"unauthenticated", "invalid"})});
}

Predicate flagged() { return has_flag(); }

Predicate provenance_bad() {
  return any_of({intersects("integrity_status", {"invalid", "unverified"}), eq("trust_level", "untrusted")});
}

Predicate realized_change() {
  return all_of({kind_in({"ObservationNode"}), present("environment_state_change")});
}

PathSpec spec(Direction d, StringList edges, Predicate terminal, bool cross_agent = false) {
  PathSpec s;
  s.direction = d;
  s.allowed_edge_kinds = std::move(edges);
  s.terminal_predicate = std::move(terminal);
  s.cross_agent = cross_agent;
  return s;
}

Clause clause(Scope scope, Predicate p, Quantifier q = Quantifier::Exists) { return {scope, std::move(p), q}; }

EntrySelector nodes(StringList kinds, Predicate p = always()) {
  return {ElementClass::Node, std::move(kinds), std::move(p)};
}

AuditRule goal_hijack() {
  auto deviated = any_of({
      flagged(),
      all_of({negate(refs_any({"basis"}, all_of({kind_in({"ExternalNode"}), eq("type", "user_input")}))),
              refs_any({"basis"}, untrusted())}),
  });
  auto action = kind_in({"ActionNode"});
  return {"ASI01",
          "Agent Goal Hijack",
          nodes({"GoalNode"}),
          spec(Direction::Backward, {"evolution", "reads_from", "writes_to", "propagation"}, untrusted(), true),
          spec(Direction::Forward, {"evolution"}, action),
          {clause(Scope::Entry, deviated), clause(Scope::BackOrigin, untrusted()),
           clause(Scope::FwdTerminus, action)}};
}

AuditRule tool_misuse() {
  auto destructive_caller = in_neighbor({"invokes"}, all_of({kind_in({"ActionNode"}), has_flag({"destructive_command"})}));
  return {"ASI02",
          "Tool Misuse and Exploitation",
          nodes({"ToolNode"}),
          spec(Direction::Backward,
               {"invokes", "selects", "flows_to", "transitions_to", "influences", "reads_from", "writes_to"},
               untrusted()),
          spec(Direction::Forward, {"emits", "evolution"}, realized_change()),
          {clause(Scope::Entry, destructive_caller), clause(Scope::BackOrigin, untrusted()),
           clause(Scope::FwdTerminus, realized_change())}};
}

AuditRule privilege_abuse() {
  auto poisoned_store = all_of({kind_in({"LongTermMemoryNode"}), in_neighbor({"writes_to"}, flagged())});
  auto origin = any_of({poisoned_store, untrusted()});
  auto bypassed = all_of({kind_in({"ActionNode"}), eq("confirmation_status", "bypassed")});
  return {"ASI03",
          "Identity and Privilege Abuse",
          nodes({"ReasoningNode"}),
          spec(Direction::Backward, {"evolution", "reads_from", "writes_to"}, origin),
          spec(Direction::Forward, {"evolution", "invokes", "selects"}, bypassed),
          {clause(Scope::Entry, has_flag({"confirmation_bypass", "privilege_claim"})),
           clause(Scope::BackOrigin, origin), clause(Scope::FwdTerminus, bypassed)}};
}

AuditRule supply_chain() {
  auto loaded = in_neighbor({"has_prompt", "uses_model", "loads_tool", "loads_skill", "depends_on"},
                            kind_in({"AgentNode", "CodeNode"}));
  auto used = in_neighbor({"selects", "invokes", "reads_from"}, kind_in({"runtime"}));
  return {"ASI04",
          "Agentic Supply Chain Vulnerabilities",
          nodes({"ToolNode", "SkillNode", "PromptNode", "CodeNode", "LLMNode"}),
          spec(Direction::Backward, {"structural", "updates"}, always()),
          spec(Direction::Forward, {"emits", "evolution", "reads_from"}, realized_change()),
          {clause(Scope::Entry, all_of({provenance_bad(), loaded, used})),
           clause(Scope::FwdTerminus, realized_change())}};
}

AuditRule code_execution() {
  auto payload = all_of({kind_in({"SkillNode", "CodeNode"}),
                         any_of({flagged(), intersects("integrity_status", {"unverified", "invalid"})})});
  auto fed_by_payload = in_neighbor({"invokes"}, refs_any({"parameter_source"}, payload));
  auto ran = all_of({realized_change(), eq("execution_status", "succeeded")});
  auto external = kind_in({"ExternalNode"});
  return {"ASI05",
          "Unexpected Code Execution",
          nodes({"ToolNode"}),
          spec(Direction::Backward, {"invokes", "evolution", "reads_from"}, external),
          spec(Direction::Forward, {"emits", "evolution"}, ran),
          {clause(Scope::Entry, fed_by_payload), clause(Scope::BackOrigin, external),
           clause(Scope::BackPath, negate(eq("confirmation_status", "confirmed")), Quantifier::Forall),
           clause(Scope::FwdTerminus, ran)}};
}

AuditRule memory_poisoning() {
  auto memory_touch = any_of({
      all_of({kind_in({"ActionNode"}), eq("type", "memory_write")}),
      all_of({kind_in({"ContextNode"}), out_neighbor({"reads_from"}, kind_in({"LongTermMemoryNode"}))}),
  });
  auto carried = all_of({kind_in({"ReasoningNode", "ActionNode"}), intersects_entry("danger_flags", "danger_flags")});
  return {"ASI06",
          "Memory and Context Poisoning",
          nodes({"ActionNode", "ContextNode"}),
          spec(Direction::Backward, {"evolution", "reads_from", "writes_to"}, untrusted()),
          spec(Direction::Forward, {"evolution", "writes_to", "reads_from"}, carried),
          {clause(Scope::Entry, all_of({memory_touch, flagged()})), clause(Scope::BackOrigin, untrusted()),
           clause(Scope::FwdTerminus, carried)}};
}

AuditRule insecure_messaging() {
  auto broken = any_of({eq("integrity_status", "invalid"),
                        intersects("authentication_status", {"unauthenticated", "invalid"})});
  auto external = kind_in({"ExternalNode"});
  auto action = kind_in({"ActionNode"});
  return {"ASI07",
          "Insecure Inter-Agent Communication",
          {ElementClass::Edge, {"AgentPropagationEdge"}, always()},
          spec(Direction::Backward, {"evolution"}, external),
          spec(Direction::Forward, {"evolution"}, action),
          {clause(Scope::Entry, broken), clause(Scope::BackOrigin, external),
           clause(Scope::BackPath, negate(eq_entry("content", "content")), Quantifier::Forall),
           clause(Scope::FwdTerminus, action)}};
}

AuditRule cascading_failure() {
  auto drifted = all_of({kind_in({"GoalNode"}), flagged(), ne_entry("agent_id", "source_agent")});
  auto back = spec(Direction::Backward, {"evolution", "propagation"}, untrusted(), true);
  back.temporal = true;
  return {"ASI08",
          "Cascading Failures",
          {ElementClass::Edge, {"AgentPropagationEdge"}, always()},
          back,
          spec(Direction::Forward, {"evolution", "propagation"}, drifted, true),
          {clause(Scope::Entry, negate(eq("propagation_status", "dropped"))),
           clause(Scope::BackOrigin, untrusted()), clause(Scope::FwdTerminus, drifted)}};
}

AuditRule trust_exploitation() {
  auto origin = any_of({untrusted(), all_of({kind_in({"static"}), flagged()})});
  auto bypassed = all_of({kind_in({"ActionNode"}), eq("confirmation_status", "bypassed")});
  return {"ASI09",
          "Human-Agent Trust Exploitation",
          nodes({"ExternalNode", "ObservationNode"}),
          spec(Direction::Backward, {"evolution", "reads_from", "propagation"}, origin, true),
          spec(Direction::Forward, {"evolution", "writes_to", "reads_from"}, bypassed),
          {clause(Scope::Entry, flagged()), clause(Scope::BackOrigin, origin),
           clause(Scope::FwdTerminus, bypassed)}};
}

AuditRule rogue_agent() {
  auto configured = all_of({kind_in({"static"}), flagged()});
  auto foreign_action = all_of({kind_in({"ActionNode"}), ne_entry("agent_id", "agent_id")});
  auto back = spec(Direction::Backward, {"has_prompt", "depends_on", "updates"}, configured);
  back.include_start = true;
  return {"ASI10",
          "Rogue Agents",
          nodes({"AgentNode", "PromptNode", "CodeNode"}),
          back,
          spec(Direction::Forward, {"reads_from", "evolution", "propagation"}, foreign_action, true),
          {clause(Scope::Entry, flagged()), clause(Scope::BackOrigin, configured),
           clause(Scope::BackPath, negate(kind_in({"runtime"})), Quantifier::Forall),
           clause(Scope::FwdTerminus, foreign_action)}};
}

}  // namespace

std::vector<AuditRule> builtin_rules() {
  return {goal_hijack(),      tool_misuse(),        privilege_abuse(),   supply_chain(),
          code_execution(),   memory_poisoning(),   insecure_messaging(), cascading_failure(),
          trust_exploitation(), rogue_agent()};
}

}  // namespace agentbom
