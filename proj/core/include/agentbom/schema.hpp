#pragma once

// Closed vocabularies of the Agent-BOM graph: node kinds and their layers,
// edge kinds and their families, the endpoint-constraint table, and the
// registered security-attribute keys with their value spaces.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace agentbom {

enum class Layer { Static, Runtime, Auxiliary };

enum class NodeKind {
  // static capability layer
  AgentNode,
  CodeNode,
  LLMNode,
  PromptNode,
  ToolNode,
  SkillNode,
  LongTermMemoryNode,
  // runtime semantic layer
  ExternalNode,
  GoalNode,
  ContextNode,
  ReasoningNode,
  DecisionNode,
  ActionNode,
  ObservationNode,
  OutputNode,
  // auxiliary targets of acts_on / writes_to
  EnvironmentNode,
  ArtifactNode,
};

inline constexpr std::array kAllNodeKinds = {
    NodeKind::AgentNode,       NodeKind::CodeNode,        NodeKind::LLMNode,
    NodeKind::PromptNode,      NodeKind::ToolNode,        NodeKind::SkillNode,
    NodeKind::LongTermMemoryNode, NodeKind::ExternalNode, NodeKind::GoalNode,
    NodeKind::ContextNode,     NodeKind::ReasoningNode,   NodeKind::DecisionNode,
    NodeKind::ActionNode,      NodeKind::ObservationNode, NodeKind::OutputNode,
    NodeKind::EnvironmentNode, NodeKind::ArtifactNode,
};

enum class EdgeFamily { Structural, Evolution, Binding, Propagation };

enum class EdgeKind {
  // structural dependency
  HasPrompt,
  UsesModel,
  LoadsTool,
  LoadsSkill,
  DependsOn,
  // runtime evolution
  FlowsTo,
  TransitionsTo,
  Influences,
  ActsOn,
  Emits,
  // cross-layer binding
  ReadsFrom,
  Selects,
  Invokes,
  WritesTo,
  Updates,
  // cross-agent propagation
  SendsTo,
  DelegatesTo,
  RespondsTo,
  SharesContextWith,
  SharesMemoryWith,
};

inline constexpr std::array kAllEdgeKinds = {
    EdgeKind::HasPrompt,   EdgeKind::UsesModel,     EdgeKind::LoadsTool,
    EdgeKind::LoadsSkill,  EdgeKind::DependsOn,     EdgeKind::FlowsTo,
    EdgeKind::TransitionsTo, EdgeKind::Influences,  EdgeKind::ActsOn,
    EdgeKind::Emits,       EdgeKind::ReadsFrom,     EdgeKind::Selects,
    EdgeKind::Invokes,     EdgeKind::WritesTo,      EdgeKind::Updates,
    EdgeKind::SendsTo,     EdgeKind::DelegatesTo,   EdgeKind::RespondsTo,
    EdgeKind::SharesContextWith, EdgeKind::SharesMemoryWith,
};

Layer layer_of(NodeKind kind) noexcept;
EdgeFamily family_of(EdgeKind kind) noexcept;

std::string_view to_string(Layer layer) noexcept;
std::string_view to_string(NodeKind kind) noexcept;
std::string_view to_string(EdgeKind kind) noexcept;
std::string_view to_string(EdgeFamily family) noexcept;

std::optional<NodeKind> parse_node_kind(std::string_view name) noexcept;
std::optional<EdgeKind> parse_edge_kind(std::string_view name) noexcept;

/// Short prefix used in generated node ids, e.g. "ext" for ExternalNode.
std::string_view id_prefix(NodeKind kind) noexcept;

/// Expands an edge-kind token into the set it denotes. Accepts a concrete
/// kind ("invokes"), a family name ("propagation"), or the alias
/// "AgentPropagationEdge". Returns an empty vector for unknown tokens.
std::vector<EdgeKind> expand_edge_kinds(std::string_view token);

/// Endpoint constraint: whether an edge of `kind` may run from a node of kind
/// `source` to a node of kind `target`.
bool endpoint_allowed(EdgeKind kind, NodeKind source, NodeKind target) noexcept;

/// Human-readable rendering of the allowed pairs for `kind`, used in
/// EndpointKindViolation messages.
std::string describe_endpoint_constraint(EdgeKind kind);

/// True for edge kinds whose information flow runs target -> source.
/// reads_from points from the reader to the store it reads, while content
/// moves from the store into the reader; traversal follows the flow.
bool flow_reversed(EdgeKind kind) noexcept;

// ---------------------------------------------------------------------------
// Attribute schema

enum class ValueType { Text, Token, Bool, Instant, StringList, KeyValueMap };

struct AttributeSpec {
  std::string_view key;
  ValueType type;
  std::span<const std::string_view> tokens;  // enum value space, Token only
  bool node_reference = false;  // list/text entries may name node ids
};

/// Registered attribute keys, sorted by key.
std::span<const AttributeSpec> attribute_registry() noexcept;
const AttributeSpec* find_attribute(std::string_view key) noexcept;

std::string_view to_string(ValueType type) noexcept;

}  // namespace agentbom
