#pragma once

// Static manifest + runtime event stream -> AgentBomGraph.
//
// Node ids: static nodes are "<prefix>.<name>" (agent.planner, tool.exec,
// prompt.planner, llm.<model>, skill.<name>, ltm.<store>, code.<name>);
// runtime nodes are "<prefix>.<event_id>". Edge ids are
// "<kind>:<source>-><target>".

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "agentbom/graph.hpp"
#include "agentbom/matcher.hpp"

namespace agentbom {

struct Provenance {
  std::optional<std::string> source;
  std::optional<std::string> integrity_status;
  std::optional<std::string> trust_level;

  bool operator==(const Provenance&) const = default;
};

struct PromptDecl {
  std::string content;
  Provenance provenance;  // read from the prompt object itself

  bool operator==(const PromptDecl&) const = default;
};

struct ModelDecl {
  std::string name;
  std::string provider;

  bool operator==(const ModelDecl&) const = default;
};

struct ToolDecl {
  std::string tool_name;
  std::string input_schema;
  StringList permission_scope;
  Provenance provenance;

  bool operator==(const ToolDecl&) const = default;
};

struct SkillDecl {
  std::string skill_name;
  std::string declared_function;
  std::string implementation_summary;
  Provenance provenance;

  bool operator==(const SkillDecl&) const = default;
};

struct MemoryStoreDecl {
  std::string store_id;
  std::string type;

  bool operator==(const MemoryStoreDecl&) const = default;
};

struct CodeDependency {
  std::string name;
  std::string version;
  Provenance provenance;

  bool operator==(const CodeDependency&) const = default;
};

struct AgentDecl {
  std::string agent_id;
  std::string role;
  std::string policy_boundary;
  std::optional<PromptDecl> system_prompt;
  std::optional<ModelDecl> model;
  std::vector<ToolDecl> tools;
  std::vector<SkillDecl> skills;
  std::vector<MemoryStoreDecl> memory_stores;
  std::vector<CodeDependency> code_dependencies;

  bool operator==(const AgentDecl&) const = default;
};

struct CapabilityManifest {
  std::vector<AgentDecl> agents;

  bool operator==(const CapabilityManifest&) const = default;
};

enum class EventType {
  ExternalInput,
  GoalFormed,
  ContextAssembled,
  ReasoningStep,
  DecisionMade,
  ActionTaken,
  Observation,
  OutputEmitted,
  MemoryRead,
  MemoryWrite,
  ToolInvocation,
  SkillInvocation,
  MessageSent,
  MessageReceived,
  Delegation,
};

std::string_view to_string(EventType t) noexcept;
std::optional<EventType> parse_event_type(std::string_view name) noexcept;
NodeKind node_kind_for(EventType t) noexcept;

struct TraceEvent {
  std::string event_id;
  std::string trace_id;
  std::string agent_id;
  std::string timestamp;
  EventType event_type = EventType::ExternalInput;
  std::string content;
  StringList refs;
  AttributeMap attrs;

  bool operator==(const TraceEvent&) const = default;
};

/// Node id a runtime event maps to, e.g. "goal.planner.2".
std::string runtime_node_id(const TraceEvent& e);
std::string edge_id(EdgeKind kind, std::string_view source, std::string_view target);

// Wire formats ---------------------------------------------------------------

CapabilityManifest manifest_from_json(const nlohmann::json& doc);
nlohmann::json manifest_to_json(const CapabilityManifest& m);
CapabilityManifest parse_manifest(std::string_view text);

TraceEvent event_from_json(const nlohmann::json& doc);
nlohmann::json event_to_json(const TraceEvent& e);
/// One event per non-blank line.
std::vector<TraceEvent> parse_trace_jsonl(std::string_view text);
std::string write_trace_jsonl(const std::vector<TraceEvent>& events);

// Construction steps ---------------------------------------------------------

/// Step 1: AgentNodes and their capability children with structural edges.
AgentBomGraph extract_static(const CapabilityManifest& manifest, const DangerMatcher& matcher);

struct MessagePair {
  std::size_t sent;      // index into the event list
  std::size_t received;  // index into the event list
};

struct MessagePairing {
  std::vector<MessagePair> pairs;
  std::vector<std::size_t> unmatched_sent;
  std::vector<std::size_t> unmatched_received;
};

/// Pairs message_sent with message_received by attrs.message_id, then by a
/// direct ref, then by (sender, receiver, content, nearest timestamp).
MessagePairing pair_messages(const std::vector<TraceEvent>& events);

struct RuntimeLayer {
  std::vector<Node> nodes;  // one per event, in event order
  std::vector<Edge> edges;  // evolution edges from refs
};

/// Step 2: one runtime node per event plus flows_to/influences edges.
/// `static_graph` resolves static ids named in parameter_source.
RuntimeLayer normalize_events(const std::vector<TraceEvent>& events, const AgentBomGraph& static_graph,
                              const DangerMatcher& matcher);

struct BindingLayer {
  std::vector<Node> nodes;  // environment targets and unmatched-message sinks
  std::vector<Edge> edges;  // binding, acts_on/emits and propagation edges
};

/// Step 3: cross-layer and cross-agent edges. `graph` must already hold the
/// static and runtime layers.
BindingLayer bind_cross_layer(const AgentBomGraph& graph, const std::vector<TraceEvent>& events,
                              const DangerMatcher& matcher);

/// Step 4: extract_static -> normalize_events -> bind_cross_layer ->
/// validate. Throws AssemblyValidationFailed if validate reports anything.
AgentBomGraph assemble(const CapabilityManifest& manifest, const std::vector<TraceEvent>& events,
                       const DangerMatcher& matcher = DangerMatcher::default_pack());

}  // namespace agentbom
