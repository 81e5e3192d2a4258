#include "agentbom/schema.hpp"

#include <algorithm>
#include <initializer_list>

namespace agentbom {

namespace {

using NK = NodeKind;
using EK = EdgeKind;

bool is_runtime(NodeKind k) { return layer_of(k) == Layer::Runtime; }
bool is_static(NodeKind k) { return layer_of(k) == Layer::Static; }

bool in(NodeKind k, std::initializer_list<NodeKind> set) {
  return std::find(set.begin(), set.end(), k) != set.end();
}

constexpr std::string_view kTrust[] = {"trusted", "untrusted", "unknown"};
constexpr std::string_view kIntegrity[] = {"valid", "invalid", "unverified"};
constexpr std::string_view kAuth[] = {"authenticated", "unauthenticated", "invalid"};
constexpr std::string_view kConfirm[] = {"confirmed", "bypassed", "not_required"};
constexpr std::string_view kPropagation[] = {"delivered", "tampered", "dropped"};
constexpr std::string_view kExecution[] = {"succeeded", "failed", "blocked"};
constexpr std::string_view kSandbox[] = {"sandboxed", "unsandboxed"};

constexpr AttributeSpec kRegistry[] = {
    {"action_intent", ValueType::Text, {}},
    {"affected_resource", ValueType::StringList, {}},
    {"agent_id", ValueType::Text, {}},
    {"authentication_status", ValueType::Token, kAuth},
    {"basis", ValueType::StringList, {}, true},
    {"code_file", ValueType::Text, {}},
    {"confirmation_status", ValueType::Token, kConfirm},
    {"content", ValueType::Text, {}},
    {"danger_flags", ValueType::StringList, {}},
    {"declared_function", ValueType::Text, {}},
    {"environment_state_change", ValueType::Text, {}},
    {"execution_environment", ValueType::Text, {}},
    {"execution_status", ValueType::Token, kExecution},
    {"implementation_summary", ValueType::Text, {}},
    {"input_schema", ValueType::Text, {}},
    {"integrity_status", ValueType::Token, kIntegrity},
    {"message_id", ValueType::Text, {}},
    {"name", ValueType::Text, {}},
    {"parameter_source", ValueType::StringList, {}, true},
    {"parameters", ValueType::KeyValueMap, {}},
    {"permission_scope", ValueType::StringList, {}},
    {"policy_boundary", ValueType::Text, {}},
    {"propagation_status", ValueType::Token, kPropagation},
    {"provider", ValueType::Text, {}},
    {"role", ValueType::Text, {}},
    {"sandbox_status", ValueType::Token, kSandbox},
    {"selected_tools", ValueType::StringList, {}},
    {"shared_state", ValueType::Text, {}},
    {"side_effects", ValueType::StringList, {}},
    {"skill_name", ValueType::Text, {}},
    {"source", ValueType::Text, {}, true},
    {"source_agent", ValueType::Text, {}},
    {"store_id", ValueType::Text, {}},
    {"target", ValueType::Text, {}},
    {"target_agent", ValueType::Text, {}},
    {"task_dependency", ValueType::Text, {}},
    {"timestamp", ValueType::Instant, {}},
    {"tool_name", ValueType::Text, {}},
    {"trace_id", ValueType::Text, {}},
    {"trust_level", ValueType::Token, kTrust},
    {"type", ValueType::Text, {}},
    {"version", ValueType::Text, {}},
};

}  // namespace

Layer layer_of(NodeKind kind) noexcept {
  switch (kind) {
    case NK::AgentNode:
    case NK::CodeNode:
    case NK::LLMNode:
    case NK::PromptNode:
    case NK::ToolNode:
    case NK::SkillNode:
    case NK::LongTermMemoryNode:
      return Layer::Static;
    case NK::EnvironmentNode:
    case NK::ArtifactNode:
      return Layer::Auxiliary;
    default:
      return Layer::Runtime;
  }
}

EdgeFamily family_of(EdgeKind kind) noexcept {
  switch (kind) {
    case EK::HasPrompt:
    case EK::UsesModel:
    case EK::LoadsTool:
    case EK::LoadsSkill:
    case EK::DependsOn:
      return EdgeFamily::Structural;
    case EK::FlowsTo:
    case EK::TransitionsTo:
    case EK::Influences:
    case EK::ActsOn:
    case EK::Emits:
      return EdgeFamily::Evolution;
    case EK::ReadsFrom:
    case EK::Selects:
    case EK::Invokes:
    case EK::WritesTo:
    case EK::Updates:
      return EdgeFamily::Binding;
    default:
      return EdgeFamily::Propagation;
  }
}

std::string_view to_string(Layer layer) noexcept {
  switch (layer) {
    case Layer::Static: return "static";
    case Layer::Runtime: return "runtime";
    case Layer::Auxiliary: return "auxiliary";
  }
  return "";
}

std::string_view to_string(NodeKind kind) noexcept {
  switch (kind) {
    case NK::AgentNode: return "AgentNode";
    case NK::CodeNode: return "CodeNode";
    case NK::LLMNode: return "LLMNode";
    case NK::PromptNode: return "PromptNode";
    case NK::ToolNode: return "ToolNode";
    case NK::SkillNode: return "SkillNode";
    case NK::LongTermMemoryNode: return "LongTermMemoryNode";
    case NK::ExternalNode: return "ExternalNode";
    case NK::GoalNode: return "GoalNode";
    case NK::ContextNode: return "ContextNode";
    case NK::ReasoningNode: return "ReasoningNode";
    case NK::DecisionNode: return "DecisionNode";
    case NK::ActionNode: return "ActionNode";
    case NK::ObservationNode: return "ObservationNode";
    case NK::OutputNode: return "OutputNode";
    case NK::EnvironmentNode: return "EnvironmentNode";
    case NK::ArtifactNode: return "ArtifactNode";
  }
  return "";
}

std::string_view to_string(EdgeKind kind) noexcept {
  switch (kind) {
    case EK::HasPrompt: return "has_prompt";
    case EK::UsesModel: return "uses_model";
    case EK::LoadsTool: return "loads_tool";
    case EK::LoadsSkill: return "loads_skill";
    case EK::DependsOn: return "depends_on";
    case EK::FlowsTo: return "flows_to";
    case EK::TransitionsTo: return "transitions_to";
    case EK::Influences: return "influences";
    case EK::ActsOn: return "acts_on";
    case EK::Emits: return "emits";
    case EK::ReadsFrom: return "reads_from";
    case EK::Selects: return "selects";
    case EK::Invokes: return "invokes";
    case EK::WritesTo: return "writes_to";
    case EK::Updates: return "updates";
    case EK::SendsTo: return "sends_to";
    case EK::DelegatesTo: return "delegates_to";
    case EK::RespondsTo: return "responds_to";
    case EK::SharesContextWith: return "shares_context_with";
    case EK::SharesMemoryWith: return "shares_memory_with";
  }
  return "";
}

std::string_view to_string(EdgeFamily family) noexcept {
  switch (family) {
    case EdgeFamily::Structural: return "structural";
    case EdgeFamily::Evolution: return "evolution";
    case EdgeFamily::Binding: return "binding";
    case EdgeFamily::Propagation: return "propagation";
  }
  return "";
}

std::optional<NodeKind> parse_node_kind(std::string_view name) noexcept {
  for (auto k : kAllNodeKinds) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::optional<EdgeKind> parse_edge_kind(std::string_view name) noexcept {
  for (auto k : kAllEdgeKinds) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::string_view id_prefix(NodeKind kind) noexcept {
  switch (kind) {
    case NK::AgentNode: return "agent";
    case NK::CodeNode: return "code";
    case NK::LLMNode: return "llm";
    case NK::PromptNode: return "prompt";
    case NK::ToolNode: return "tool";
    case NK::SkillNode: return "skill";
    case NK::LongTermMemoryNode: return "ltm";
    case NK::ExternalNode: return "ext";
    case NK::GoalNode: return "goal";
    case NK::ContextNode: return "ctx";
    case NK::ReasoningNode: return "rsn";
    case NK::DecisionNode: return "dec";
    case NK::ActionNode: return "act";
    case NK::ObservationNode: return "obs";
    case NK::OutputNode: return "out";
    case NK::EnvironmentNode: return "env";
    case NK::ArtifactNode: return "art";
  }
  return "";
}

std::vector<EdgeKind> expand_edge_kinds(std::string_view token) {
  if (auto k = parse_edge_kind(token)) return {*k};
  std::optional<EdgeFamily> family;
  if (token == "AgentPropagationEdge" || token == "propagation") {
    family = EdgeFamily::Propagation;
  } else if (token == "structural") {
    family = EdgeFamily::Structural;
  } else if (token == "evolution") {
    family = EdgeFamily::Evolution;
  } else if (token == "binding") {
    family = EdgeFamily::Binding;
  }
  std::vector<EdgeKind> out;
  if (!family) return out;
  for (auto k : kAllEdgeKinds) {
    if (family_of(k) == *family) out.push_back(k);
  }
  return out;
}

bool endpoint_allowed(EdgeKind kind, NodeKind s, NodeKind t) noexcept {
  switch (kind) {
    case EK::HasPrompt: return s == NK::AgentNode && t == NK::PromptNode;
    case EK::UsesModel: return s == NK::AgentNode && t == NK::LLMNode;
    case EK::LoadsTool: return s == NK::AgentNode && t == NK::ToolNode;
    case EK::LoadsSkill: return s == NK::AgentNode && t == NK::SkillNode;
    case EK::DependsOn:
      return in(s, {NK::AgentNode, NK::CodeNode}) && t == NK::CodeNode;
    case EK::FlowsTo:
    case EK::TransitionsTo:
    case EK::Influences:
      return is_runtime(s) && is_runtime(t);
    case EK::ActsOn:
      return s == NK::ActionNode && in(t, {NK::EnvironmentNode, NK::ArtifactNode});
    case EK::Emits:
      return (is_runtime(s) || in(s, {NK::ToolNode, NK::SkillNode})) &&
             t == NK::ObservationNode;
    case EK::ReadsFrom:
      return in(s, {NK::ContextNode, NK::ReasoningNode}) &&
             in(t, {NK::LongTermMemoryNode, NK::PromptNode});
    case EK::Selects:
      return s == NK::DecisionNode && in(t, {NK::ToolNode, NK::SkillNode});
    case EK::Invokes: return s == NK::ActionNode && t == NK::ToolNode;
    case EK::WritesTo:
      return in(s, {NK::ActionNode, NK::ObservationNode, NK::OutputNode}) &&
             in(t, {NK::LongTermMemoryNode, NK::ArtifactNode});
    case EK::Updates: return is_runtime(s) && is_static(t);
    case EK::SendsTo:
      return in(s, {NK::OutputNode, NK::ActionNode}) &&
             in(t, {NK::ExternalNode, NK::ContextNode});
    case EK::DelegatesTo:
      return in(s, {NK::AgentNode, NK::DecisionNode}) && t == NK::AgentNode;
    case EK::RespondsTo:
      return in(s, {NK::OutputNode, NK::ActionNode}) &&
             in(t, {NK::ExternalNode, NK::ContextNode, NK::GoalNode});
    case EK::SharesContextWith:
      return in(s, {NK::AgentNode, NK::ContextNode}) &&
             in(t, {NK::AgentNode, NK::ContextNode});
    case EK::SharesMemoryWith:
      return s == NK::AgentNode && t == NK::LongTermMemoryNode;
  }
  return false;
}

std::string describe_endpoint_constraint(EdgeKind kind) {
  std::string sources;
  std::string targets;
  for (auto s : kAllNodeKinds) {
    bool any = false;
    for (auto t : kAllNodeKinds) any = any || endpoint_allowed(kind, s, t);
    if (any) sources += (sources.empty() ? "" : "|") + std::string(to_string(s));
  }
  for (auto t : kAllNodeKinds) {
    bool any = false;
    for (auto s : kAllNodeKinds) any = any || endpoint_allowed(kind, s, t);
    if (any) targets += (targets.empty() ? "" : "|") + std::string(to_string(t));
  }
  return std::string(to_string(kind)) + ": {" + sources + "} -> {" + targets + "}";
}

bool flow_reversed(EdgeKind kind) noexcept { return kind == EK::ReadsFrom; }

std::span<const AttributeSpec> attribute_registry() noexcept { return kRegistry; }

const AttributeSpec* find_attribute(std::string_view key) noexcept {
  auto it = std::lower_bound(std::begin(kRegistry), std::end(kRegistry), key,
                             [](const AttributeSpec& a, std::string_view k) { return a.key < k; });
  if (it == std::end(kRegistry) || it->key != key) return nullptr;
  return &*it;
}

std::string_view to_string(ValueType type) noexcept {
  switch (type) {
    case ValueType::Text: return "text";
    case ValueType::Token: return "enum";
    case ValueType::Bool: return "boolean";
    case ValueType::Instant: return "instant";
    case ValueType::StringList: return "string-list";
    case ValueType::KeyValueMap: return "key-value map";
  }
  return "";
}

}  // namespace agentbom
