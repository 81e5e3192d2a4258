#include "agentbom/ingestion.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>

namespace agentbom {

namespace {

using ET = EventType;

// Position in the cognitive order external -> goal -> context -> reasoning
// -> decision -> action -> observation -> output.
int stage_of(EventType t) {
  switch (t) {
    case ET::ExternalInput:
    case ET::MessageReceived: return 0;
    case ET::GoalFormed: return 1;
    case ET::ContextAssembled: return 2;
    case ET::ReasoningStep: return 3;
    case ET::DecisionMade:
    case ET::Delegation: return 4;
    case ET::ActionTaken:
    case ET::ToolInvocation:
    case ET::SkillInvocation:
    case ET::MemoryRead:
    case ET::MemoryWrite:
    case ET::MessageSent: return 5;
    case ET::Observation: return 6;
    case ET::OutputEmitted: return 7;
  }
  return 0;
}

std::optional<std::string> default_type(EventType t) {
  switch (t) {
    case ET::ExternalInput: return "user_input";
    case ET::MemoryRead: return "memory_read";
    case ET::MemoryWrite: return "memory_write";
    case ET::ToolInvocation: return "tool_call";
    case ET::SkillInvocation: return "skill_call";
    case ET::MessageSent: return "message_send";
    case ET::MessageReceived: return "agent_message";
    case ET::Delegation: return "delegation";
    default: return std::nullopt;
  }
}

const std::set<std::string>& permitted_attrs(EventType t) {
  static const StringList kCommon = {"authentication_status", "execution_environment", "integrity_status",
                                     "role",   "shared_state", "source", "task_dependency",
                                     "trust_level", "type"};
  static const StringList kAction = {"action_intent", "affected_resource", "confirmation_status",
                                     "execution_status", "parameter_source", "parameters",
                                     "permission_scope", "sandbox_status", "side_effects", "target"};
  static const std::map<EventType, StringList> kExtra = {
      {ET::ExternalInput, {}},
      {ET::GoalFormed, {"action_intent"}},
      {ET::ContextAssembled, {}},
      {ET::ReasoningStep, {"action_intent"}},
      {ET::DecisionMade, {"action_intent", "confirmation_status", "selected_tools"}},
      {ET::ActionTaken, kAction},
      {ET::Observation, {"affected_resource", "environment_state_change", "execution_status", "side_effects"}},
      {ET::OutputEmitted, {"target"}},
      {ET::MemoryRead, {"store_id"}},
      {ET::MemoryWrite, {"confirmation_status", "store_id"}},
      {ET::ToolInvocation, kAction},
      {ET::SkillInvocation, kAction},
      {ET::MessageSent, {"message_id", "propagation_status", "target_agent"}},
      {ET::MessageReceived, {"message_id", "propagation_status", "source_agent"}},
      {ET::Delegation, {"action_intent", "confirmation_status", "target_agent"}},
  };
  static const std::map<EventType, std::set<std::string>> kTable = [] {
    std::map<EventType, std::set<std::string>> out;
    for (const auto& [type, extra] : kExtra) {
      auto& s = out[type];
      s.insert(kCommon.begin(), kCommon.end());
      s.insert(extra.begin(), extra.end());
    }
    for (const char* k : {"tool_name"}) out[ET::ToolInvocation].insert(k);
    for (const char* k : {"skill_name", "tool_name"}) out[ET::SkillInvocation].insert(k);
    return out;
  }();
  return kTable.at(t);
}

[[noreturn]] void manifest_error(const std::string& msg) { throw Error(ErrorCode::ManifestParseError, msg); }

void put_text(AttributeMap& attrs, const char* key, const std::string& value) {
  if (!value.empty()) attrs[key] = value;
}

void put_provenance(AttributeMap& attrs, const Provenance& p) {
  if (p.source) attrs["source"] = *p.source;
  if (p.integrity_status) attrs["integrity_status"] = *p.integrity_status;
  if (p.trust_level) attrs["trust_level"] = *p.trust_level;
}

Edge make_edge(EdgeKind kind, const std::string& source, const std::string& target) {
  Edge e;
  e.id = edge_id(kind, source, target);
  e.kind = kind;
  e.source = source;
  e.target = target;
  return e;
}

// Per (agent, trace) event positions, in stream order.
using Lane = std::vector<std::size_t>;
std::map<std::pair<std::string, std::string>, Lane> lanes_of(const std::vector<TraceEvent>& events) {
  std::map<std::pair<std::string, std::string>, Lane> out;
  for (std::size_t i = 0; i < events.size(); ++i) out[{events[i].agent_id, events[i].trace_id}].push_back(i);
  return out;
}

std::map<std::string, std::size_t, std::less<>> index_events(const std::vector<TraceEvent>& events) {
  std::map<std::string, std::size_t, std::less<>> index;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (events[i].event_id.empty()) throw Error(ErrorCode::EventParseError, "event with empty event_id");
    if (!index.emplace(events[i].event_id, i).second) {
      throw Error(ErrorCode::DuplicateId, "event '" + events[i].event_id + "' repeated");
    }
  }
  return index;
}

std::optional<std::string> sender_of(const TraceEvent& received, const std::vector<TraceEvent>& events,
                                     const std::map<std::string, std::size_t, std::less<>>& index) {
  if (auto s = text_attribute(received.attrs, "source_agent")) return s;
  for (const auto& r : received.refs) {
    auto it = index.find(r);
    if (it != index.end() && events[it->second].event_type == ET::MessageSent) return events[it->second].agent_id;
  }
  return std::nullopt;
}

}  // namespace

NodeKind node_kind_for(EventType t) noexcept {
  switch (t) {
    case ET::ExternalInput:
    case ET::MessageReceived: return NodeKind::ExternalNode;
    case ET::GoalFormed: return NodeKind::GoalNode;
    case ET::ContextAssembled: return NodeKind::ContextNode;
    case ET::ReasoningStep: return NodeKind::ReasoningNode;
    case ET::DecisionMade:
    case ET::Delegation: return NodeKind::DecisionNode;
    case ET::Observation: return NodeKind::ObservationNode;
    case ET::OutputEmitted: return NodeKind::OutputNode;
    default: return NodeKind::ActionNode;
  }
}

std::string runtime_node_id(const TraceEvent& e) {
  return std::string(id_prefix(node_kind_for(e.event_type))) + "." + e.event_id;
}

std::string edge_id(EdgeKind kind, std::string_view source, std::string_view target) {
  return std::string(to_string(kind)) + ":" + std::string(source) + "->" + std::string(target);
}

AgentBomGraph extract_static(const CapabilityManifest& manifest, const DangerMatcher& matcher) {
  if (manifest.agents.empty()) manifest_error("manifest declares no agents");
  std::map<std::string, std::set<std::string>> declarers;
  for (const auto& a : manifest.agents) {
    if (a.model) declarers["llm." + a.model->name].insert(a.agent_id);
    for (const auto& t : a.tools) declarers["tool." + t.tool_name].insert(a.agent_id);
    for (const auto& s : a.skills) declarers["skill." + s.skill_name].insert(a.agent_id);
    for (const auto& s : a.memory_stores) declarers["ltm." + s.store_id].insert(a.agent_id);
    for (const auto& c : a.code_dependencies) declarers["code." + c.name].insert(a.agent_id);
  }

  AgentBomGraph g;
  for (const auto& a : manifest.agents) g.add_agent({a.agent_id, a.role, a.policy_boundary});

  // A capability declared by several agents becomes one unowned node; the
  // declarations must then agree.
  auto put_node = [&](NodeKind kind, const std::string& id, const std::string& owner, AttributeMap attrs) {
    matcher.annotate(attrs);
    if (const Node* existing = g.find_node(id)) {
      if (existing->attributes != attrs) manifest_error("conflicting declarations of '" + id + "'");
      return;
    }
    Node n;
    n.id = id;
    n.kind = kind;
    if (declarers[id].size() <= 1) n.agent_id = owner;
    n.attributes = std::move(attrs);
    g.add_node(std::move(n));
  };
  auto link = [&](EdgeKind kind, const std::string& source, const std::string& target) {
    Edge e = make_edge(kind, source, target);
    if (!g.find_edge(e.id)) g.add_edge(std::move(e));
  };

  for (const auto& a : manifest.agents) {
    const std::string agent = "agent." + a.agent_id;
    AttributeMap attrs;
    put_text(attrs, "role", a.role);
    put_text(attrs, "policy_boundary", a.policy_boundary);
    put_node(NodeKind::AgentNode, agent, a.agent_id, std::move(attrs));
  }
  for (const auto& a : manifest.agents) {
    const std::string agent = "agent." + a.agent_id;
    if (a.system_prompt) {
      AttributeMap attrs;
      put_text(attrs, "content", a.system_prompt->content);
      put_provenance(attrs, a.system_prompt->provenance);
      put_node(NodeKind::PromptNode, "prompt." + a.agent_id, a.agent_id, std::move(attrs));
      link(EdgeKind::HasPrompt, agent, "prompt." + a.agent_id);
    }
    if (a.model) {
      AttributeMap attrs;
      put_text(attrs, "name", a.model->name);
      put_text(attrs, "provider", a.model->provider);
      put_node(NodeKind::LLMNode, "llm." + a.model->name, a.agent_id, std::move(attrs));
      link(EdgeKind::UsesModel, agent, "llm." + a.model->name);
    }
    for (const auto& t : a.tools) {
      AttributeMap attrs;
      put_text(attrs, "tool_name", t.tool_name);
      put_text(attrs, "input_schema", t.input_schema);
      if (!t.permission_scope.empty()) attrs["permission_scope"] = t.permission_scope;
      put_provenance(attrs, t.provenance);
      put_node(NodeKind::ToolNode, "tool." + t.tool_name, a.agent_id, std::move(attrs));
      link(EdgeKind::LoadsTool, agent, "tool." + t.tool_name);
    }
    for (const auto& s : a.skills) {
      AttributeMap attrs;
      put_text(attrs, "skill_name", s.skill_name);
      put_text(attrs, "declared_function", s.declared_function);
      put_text(attrs, "implementation_summary", s.implementation_summary);
      put_provenance(attrs, s.provenance);
      put_node(NodeKind::SkillNode, "skill." + s.skill_name, a.agent_id, std::move(attrs));
      link(EdgeKind::LoadsSkill, agent, "skill." + s.skill_name);
    }
    for (const auto& m : a.memory_stores) {
      const std::string id = "ltm." + m.store_id;
      AttributeMap attrs;
      put_text(attrs, "store_id", m.store_id);
      put_text(attrs, "type", m.type);
      put_node(NodeKind::LongTermMemoryNode, id, a.agent_id, std::move(attrs));
      if (declarers[id].size() > 1) link(EdgeKind::SharesMemoryWith, agent, id);
    }
    for (const auto& c : a.code_dependencies) {
      AttributeMap attrs;
      put_text(attrs, "name", c.name);
      put_text(attrs, "version", c.version);
      put_provenance(attrs, c.provenance);
      put_node(NodeKind::CodeNode, "code." + c.name, a.agent_id, std::move(attrs));
      link(EdgeKind::DependsOn, agent, "code." + c.name);
    }
  }
  return g;
}

MessagePairing pair_messages(const std::vector<TraceEvent>& events) {
  auto index = index_events(events);
  std::vector<std::size_t> sends;
  std::vector<std::size_t> receives;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (events[i].event_type == ET::MessageSent) sends.push_back(i);
    if (events[i].event_type == ET::MessageReceived) receives.push_back(i);
  }
  std::map<std::size_t, std::size_t> partner_of_send;
  std::set<std::size_t> paired_receives;
  auto pair = [&](std::size_t s, std::size_t r) {
    partner_of_send[s] = r;
    paired_receives.insert(r);
  };

  for (std::size_t r : receives) {
    auto id = text_attribute(events[r].attrs, "message_id");
    if (!id) continue;
    for (std::size_t s : sends) {
      if (!partner_of_send.count(s) && text_attribute(events[s].attrs, "message_id") == id) {
        pair(s, r);
        break;
      }
    }
  }
  for (std::size_t r : receives) {
    if (paired_receives.count(r)) continue;
    for (const auto& ref : events[r].refs) {
      auto it = index.find(ref);
      if (it == index.end() || events[it->second].event_type != ET::MessageSent) continue;
      if (partner_of_send.count(it->second)) continue;
      pair(it->second, r);
      break;
    }
  }
  for (std::size_t r : receives) {
    if (paired_receives.count(r)) continue;
    auto sender = sender_of(events[r], events, index);
    auto r_ms = parse_instant_ms(events[r].timestamp).value_or(0);
    std::optional<std::size_t> best;
    std::int64_t best_gap = 0;
    for (std::size_t s : sends) {
      if (partner_of_send.count(s)) continue;
      const auto& se = events[s];
      if (sender && se.agent_id != *sender) continue;
      if (text_attribute(se.attrs, "target_agent") != events[r].agent_id) continue;
      if (se.content != events[r].content) continue;
      auto gap = std::llabs(parse_instant_ms(se.timestamp).value_or(0) - r_ms);
      if (!best || gap < best_gap) {
        best = s;
        best_gap = gap;
      }
    }
    if (best) pair(*best, r);
  }

  MessagePairing out;
  for (const auto& [s, r] : partner_of_send) out.pairs.push_back({s, r});
  std::sort(out.pairs.begin(), out.pairs.end(),
            [](const MessagePair& a, const MessagePair& b) { return a.received < b.received; });
  for (std::size_t s : sends) {
    if (!partner_of_send.count(s)) out.unmatched_sent.push_back(s);
  }
  for (std::size_t r : receives) {
    if (!paired_receives.count(r)) out.unmatched_received.push_back(r);
  }
  return out;
}

RuntimeLayer normalize_events(const std::vector<TraceEvent>& events, const AgentBomGraph& static_graph,
                              const DangerMatcher& matcher) {
  auto index = index_events(events);
  auto pairing = pair_messages(events);
  std::map<std::size_t, std::size_t> sender_event;
  for (const auto& p : pairing.pairs) sender_event[p.received] = p.sent;
  std::set<std::size_t> unmatched(pairing.unmatched_received.begin(), pairing.unmatched_received.end());

  RuntimeLayer out;
  std::set<std::string> edge_ids;
  std::optional<std::int64_t> previous;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const TraceEvent& e = events[i];
    auto instant = parse_instant_ms(e.timestamp);
    if (!instant) throw Error(ErrorCode::EventParseError, "event '" + e.event_id + "' has a malformed timestamp");
    if (previous && *instant < *previous) {
      throw Error(ErrorCode::OutOfOrderTimestamp, "event '" + e.event_id + "' is earlier than its predecessor");
    }
    previous = instant;
    if (e.trace_id.empty()) throw Error(ErrorCode::MissingTraceId, "event '" + e.event_id + "' has no trace_id");

    const auto& allowed = permitted_attrs(e.event_type);
    for (const auto& [key, value] : e.attrs) {
      if (!allowed.count(key)) {
        throw Error(ErrorCode::EventParseError, "attribute '" + key + "' is not permitted on " +
                                                    std::string(to_string(e.event_type)) + " event '" +
                                                    e.event_id + "'");
      }
    }

    Node n;
    n.id = runtime_node_id(e);
    n.kind = node_kind_for(e.event_type);
    n.agent_id = e.agent_id;
    n.trace_id = e.trace_id;
    n.timestamp = e.timestamp;
    n.attributes = e.attrs;
    put_text(n.attributes, "content", e.content);
    if (auto t = default_type(e.event_type); t && !n.attributes.count("type")) n.attributes["type"] = *t;

    StringList basis;
    for (const auto& ref : e.refs) {
      auto it = index.find(ref);
      if (it == index.end()) {
        throw Error(ErrorCode::UnresolvedRef, "event '" + e.event_id + "' refs unknown event '" + ref + "'");
      }
      if (it->second >= i) {
        throw Error(ErrorCode::OutOfOrderTimestamp,
                    "event '" + e.event_id + "' refs later event '" + ref + "'");
      }
      const TraceEvent& r = events[it->second];
      if (r.trace_id != e.trace_id && e.event_type != ET::MessageReceived) {
        throw Error(ErrorCode::UnresolvedRef,
                    "event '" + e.event_id + "' refs '" + ref + "' in another trace");
      }
      const std::string ref_node = runtime_node_id(r);
      if (std::find(basis.begin(), basis.end(), ref_node) == basis.end()) basis.push_back(ref_node);
      if (r.agent_id != e.agent_id || r.trace_id != e.trace_id) continue;
      const bool adjacent = stage_of(e.event_type) == stage_of(r.event_type) + 1;
      Edge edge = make_edge(adjacent ? EdgeKind::FlowsTo : EdgeKind::Influences, ref_node, n.id);
      edge.trace_id = e.trace_id;
      edge.timestamp = e.timestamp;
      if (edge_ids.insert(edge.id).second) out.edges.push_back(std::move(edge));
    }
    if (!basis.empty()) n.attributes["basis"] = basis;

    if (n.attributes.count("parameter_source")) {
      StringList resolved;
      for (const auto& src : list_attribute(n.attributes, "parameter_source")) {
        if (auto it = index.find(src); it != index.end() && it->second < i) {
          resolved.push_back(runtime_node_id(events[it->second]));
        } else if (static_graph.find_node(src)) {
          resolved.push_back(src);
        } else {
          throw Error(ErrorCode::UnresolvedRef,
                      "event '" + e.event_id + "' parameter_source '" + src + "' names nothing earlier");
        }
      }
      n.attributes["parameter_source"] = resolved;
    }

    if (e.event_type == ET::MessageReceived) {
      std::optional<std::string> sender = text_attribute(e.attrs, "source_agent");
      if (auto it = sender_event.find(i); it != sender_event.end() && !sender) sender = events[it->second].agent_id;
      if (sender) {
        n.attributes["source_agent"] = *sender;
        if (!n.attributes.count("source") && static_graph.find_node("agent." + *sender)) {
          n.attributes["source"] = "agent." + *sender;
        }
      }
      if (unmatched.count(i)) n.attributes["propagation_status"] = std::string("dropped");
    }
    matcher.annotate(n.attributes);
    out.nodes.push_back(std::move(n));
  }
  return out;
}

BindingLayer bind_cross_layer(const AgentBomGraph& graph, const std::vector<TraceEvent>& events,
                              const DangerMatcher& matcher) {
  auto index = index_events(events);
  auto lanes = lanes_of(events);
  BindingLayer out;
  std::set<std::string> edge_ids;
  std::set<std::string> node_ids;

  auto bind = [&](EdgeKind kind, const std::string& source, const std::string& target, const TraceEvent& at,
                  AttributeMap attrs = {}) {
    Edge e = make_edge(kind, source, target);
    e.trace_id = at.trace_id;
    e.timestamp = at.timestamp;
    e.attributes = std::move(attrs);
    if (!graph.find_edge(e.id) && edge_ids.insert(e.id).second) out.edges.push_back(std::move(e));
  };
  auto require = [&](const std::string& id, const TraceEvent& e, const std::string& what) {
    if (!graph.find_node(id)) {
      throw Error(ErrorCode::UnresolvedRef, "event '" + e.event_id + "' names undeclared " + what + " '" + id + "'");
    }
    return id;
  };
  auto lane_of = [&](const TraceEvent& e) -> const Lane& { return lanes.at({e.agent_id, e.trace_id}); };
  // The decision behind an invocation: a ref'd decision, else the latest
  // earlier one in the same lane.
  auto deciding = [&](std::size_t i) -> std::optional<std::size_t> {
    const TraceEvent& e = events[i];
    for (const auto& r : e.refs) {
      auto it = index.find(r);
      if (it != index.end() && events[it->second].event_type == ET::DecisionMade &&
          events[it->second].agent_id == e.agent_id && events[it->second].trace_id == e.trace_id) {
        return it->second;
      }
    }
    std::optional<std::size_t> latest;
    for (std::size_t j : lane_of(e)) {
      if (j >= i) break;
      if (events[j].event_type == ET::DecisionMade) latest = j;
    }
    return latest;
  };

  for (const auto& [lane_key, lane] : lanes) {
    const std::string prompt = "prompt." + lane_key.first;
    if (!graph.find_node(prompt)) continue;
    for (std::size_t j : lane) {
      if (events[j].event_type == ET::ContextAssembled) {
        bind(EdgeKind::ReadsFrom, runtime_node_id(events[j]), prompt, events[j]);
        break;
      }
    }
  }

  for (std::size_t i = 0; i < events.size(); ++i) {
    const TraceEvent& e = events[i];
    const std::string node = runtime_node_id(e);
    auto tool_name = text_attribute(e.attrs, "tool_name");
    switch (e.event_type) {
      case ET::ToolInvocation: {
        if (!tool_name) throw Error(ErrorCode::UnresolvedRef, "tool_invocation '" + e.event_id + "' has no tool_name");
        auto tool = require("tool." + *tool_name, e, "tool");
        bind(EdgeKind::Invokes, node, tool, e);
        if (auto d = deciding(i)) bind(EdgeKind::Selects, runtime_node_id(events[*d]), tool, e);
        break;
      }
      case ET::SkillInvocation: {
        auto skill_name = text_attribute(e.attrs, "skill_name");
        if (!skill_name) throw Error(ErrorCode::UnresolvedRef, "skill_invocation '" + e.event_id + "' has no skill_name");
        auto skill = require("skill." + *skill_name, e, "skill");
        if (auto d = deciding(i)) bind(EdgeKind::Selects, runtime_node_id(events[*d]), skill, e);
        if (tool_name) bind(EdgeKind::Invokes, node, require("tool." + *tool_name, e, "tool"), e);
        break;
      }
      case ET::Observation:
        for (const auto& r : e.refs) {
          const TraceEvent& src = events[index.at(r)];
          if (auto t = text_attribute(src.attrs, "tool_name");
              t && (src.event_type == ET::ToolInvocation || src.event_type == ET::SkillInvocation)) {
            bind(EdgeKind::Emits, "tool." + *t, node, e);
          }
          if (auto s = text_attribute(src.attrs, "skill_name"); s && src.event_type == ET::SkillInvocation) {
            bind(EdgeKind::Emits, "skill." + *s, node, e);
          }
        }
        break;
      case ET::MemoryRead: {
        auto store = text_attribute(e.attrs, "store_id");
        if (!store) break;
        auto ltm = require("ltm." + *store, e, "memory store");
        for (std::size_t j : lane_of(e)) {
          const auto& next = events[j];
          if (j > i && (next.event_type == ET::ContextAssembled || next.event_type == ET::ReasoningStep) &&
              std::find(next.refs.begin(), next.refs.end(), e.event_id) != next.refs.end()) {
            bind(EdgeKind::ReadsFrom, runtime_node_id(events[j]), ltm, events[j]);
            break;
          }
        }
        break;
      }
      case ET::MemoryWrite:
        if (auto store = text_attribute(e.attrs, "store_id")) {
          bind(EdgeKind::WritesTo, node, require("ltm." + *store, e, "memory store"), e);
        }
        break;
      case ET::Delegation:
        if (auto target = text_attribute(e.attrs, "target_agent")) {
          bind(EdgeKind::DelegatesTo, node, require("agent." + *target, e, "agent"), e);
        }
        break;
      default: break;
    }
    if (auto target = text_attribute(e.attrs, "target");
        target && (e.event_type == ET::ActionTaken || e.event_type == ET::ToolInvocation ||
                   e.event_type == ET::SkillInvocation)) {
      const std::string env = "env." + *target;
      if (!graph.find_node(env) && node_ids.insert(env).second) {
        Node n;
        n.id = env;
        n.kind = NodeKind::EnvironmentNode;
        n.attributes["target"] = *target;
        out.nodes.push_back(std::move(n));
      }
      bind(EdgeKind::ActsOn, node, env, e);
    }
  }

  static const StringList kCarried = {"authentication_status", "integrity_status", "message_id",
                                      "propagation_status", "trust_level"};
  auto carried = [](const AttributeMap& attrs, AttributeMap& into) {
    for (const auto& key : kCarried) {
      if (auto it = attrs.find(key); it != attrs.end()) into[key] = it->second;
    }
  };
  auto pairing = pair_messages(events);
  for (const auto& p : pairing.pairs) {
    const TraceEvent& sent = events[p.sent];
    const TraceEvent& received = events[p.received];
    AttributeMap attrs;
    carried(sent.attrs, attrs);
    carried(received.attrs, attrs);
    put_text(attrs, "content", received.content.empty() ? sent.content : received.content);
    attrs["source_agent"] = sent.agent_id;
    attrs["target_agent"] = received.agent_id;
    if (!attrs.count("propagation_status")) attrs["propagation_status"] = std::string("delivered");
    matcher.annotate(attrs);
    Edge e = make_edge(EdgeKind::SendsTo, runtime_node_id(sent), runtime_node_id(received));
    e.trace_id = sent.trace_id;
    e.timestamp = received.timestamp;
    e.attributes = std::move(attrs);
    if (edge_ids.insert(e.id).second) out.edges.push_back(std::move(e));
  }
  for (std::size_t s : pairing.unmatched_sent) {
    const TraceEvent& sent = events[s];
    auto target_agent = text_attribute(sent.attrs, "target_agent");
    Node sink;
    sink.id = "ext.sink." + sent.event_id;
    sink.kind = NodeKind::ExternalNode;
    sink.agent_id = target_agent && graph.has_agent(*target_agent) ? *target_agent : sent.agent_id;
    sink.trace_id = sent.trace_id;
    sink.timestamp = sent.timestamp;
    sink.attributes["type"] = std::string("unmatched_message");
    sink.attributes["shared_state"] = std::string("unmatched_message");
    sink.attributes["propagation_status"] = std::string("dropped");
    sink.attributes["source_agent"] = sent.agent_id;
    if (target_agent) sink.attributes["target_agent"] = *target_agent;
    put_text(sink.attributes, "content", sent.content);
    AttributeMap attrs;
    carried(sent.attrs, attrs);
    put_text(attrs, "content", sent.content);
    attrs["source_agent"] = sent.agent_id;
    if (target_agent) attrs["target_agent"] = *target_agent;
    attrs["propagation_status"] = std::string("dropped");
    Edge e = make_edge(EdgeKind::SendsTo, runtime_node_id(sent), sink.id);
    e.trace_id = sent.trace_id;
    e.timestamp = sent.timestamp;
    e.attributes = std::move(attrs);
    out.nodes.push_back(std::move(sink));
    if (edge_ids.insert(e.id).second) out.edges.push_back(std::move(e));
  }
  return out;
}

AgentBomGraph assemble(const CapabilityManifest& manifest, const std::vector<TraceEvent>& events,
                       const DangerMatcher& matcher) {
  AgentBomGraph g = extract_static(manifest, matcher);
  auto runtime = normalize_events(events, g, matcher);
  for (auto& n : runtime.nodes) g.add_node(std::move(n));
  for (auto& e : runtime.edges) g.add_edge(std::move(e));
  auto binding = bind_cross_layer(g, events, matcher);
  for (auto& n : binding.nodes) g.add_node(std::move(n));
  for (auto& e : binding.edges) g.add_edge(std::move(e));
  auto violations = g.validate();
  if (!violations.empty()) {
    throw Error(ErrorCode::AssemblyValidationFailed,
                std::to_string(violations.size()) + " violation(s); first: " + violations.front().message);
  }
  return g;
}

}  // namespace agentbom
