// JSON wire formats for the capability manifest and the event stream.

#include <array>
#include <set>
#include <sstream>

#include "agentbom/ingestion.hpp"
#include "agentbom/serialize.hpp"

namespace agentbom {

namespace {

constexpr std::array<std::pair<EventType, std::string_view>, 15> kEventNames = {{
    {EventType::ExternalInput, "external_input"},
    {EventType::GoalFormed, "goal_formed"},
    {EventType::ContextAssembled, "context_assembled"},
    {EventType::ReasoningStep, "reasoning_step"},
    {EventType::DecisionMade, "decision_made"},
    {EventType::ActionTaken, "action_taken"},
    {EventType::Observation, "observation"},
    {EventType::OutputEmitted, "output_emitted"},
    {EventType::MemoryRead, "memory_read"},
    {EventType::MemoryWrite, "memory_write"},
    {EventType::ToolInvocation, "tool_invocation"},
    {EventType::SkillInvocation, "skill_invocation"},
    {EventType::MessageSent, "message_sent"},
    {EventType::MessageReceived, "message_received"},
    {EventType::Delegation, "delegation"},
}};

[[noreturn]] void manifest_error(const std::string& msg) { throw Error(ErrorCode::ManifestParseError, msg); }

std::string str_field(const Json& j, const char* key, bool required, const std::string& where) {
  if (!j.contains(key) || j.at(key).is_null()) {
    if (required) manifest_error(where + ": missing '" + key + "'");
    return {};
  }
  if (!j.at(key).is_string()) manifest_error(where + ": '" + key + "' must be a string");
  return j.at(key).get<std::string>();
}

std::optional<std::string> opt_field(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) return std::nullopt;
  return str_field(j, key, true, where);
}

StringList list_field(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) return {};
  const Json& v = j.at(key);
  if (!v.is_array()) manifest_error(where + ": '" + key + "' must be a list");
  StringList out;
  for (const auto& s : v) {
    if (!s.is_string()) manifest_error(where + ": '" + key + "' must hold strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

const Json& array_field(const Json& j, const char* key, const std::string& where) {
  static const Json kEmpty = Json::array();
  if (!j.contains(key)) return kEmpty;
  if (!j.at(key).is_array()) manifest_error(where + ": '" + key + "' must be a list");
  return j.at(key);
}

Provenance provenance_from(const Json& j, const std::string& where) {
  if (!j.is_object()) manifest_error(where + ": provenance must be an object");
  return {opt_field(j, "source", where), opt_field(j, "integrity_status", where),
          opt_field(j, "trust_level", where)};
}

void put_provenance(Json& j, const Provenance& p) {
  if (p.source) j["source"] = *p.source;
  if (p.integrity_status) j["integrity_status"] = *p.integrity_status;
  if (p.trust_level) j["trust_level"] = *p.trust_level;
}

AgentDecl agent_from(const Json& j) {
  if (!j.is_object()) manifest_error("agent entry must be an object");
  AgentDecl a;
  a.agent_id = str_field(j, "agent_id", true, "agent");
  const std::string where = "agent '" + a.agent_id + "'";
  if (a.agent_id.empty()) manifest_error("agent_id must be non-empty");
  a.role = str_field(j, "role", false, where);
  a.policy_boundary = str_field(j, "policy_boundary", false, where);
  if (j.contains("system_prompt")) {
    const Json& p = j.at("system_prompt");
    if (!p.is_object()) manifest_error(where + ": system_prompt must be an object");
    a.system_prompt = PromptDecl{str_field(p, "content", false, where), provenance_from(p, where)};
  }
  if (j.contains("model")) {
    const Json& m = j.at("model");
    if (!m.is_object()) manifest_error(where + ": model must be an object");
    a.model = ModelDecl{str_field(m, "name", true, where), str_field(m, "provider", false, where)};
  }
  for (const auto& t : array_field(j, "tools", where)) {
    ToolDecl d;
    d.tool_name = str_field(t, "tool_name", true, where);
    d.input_schema = str_field(t, "input_schema", false, where);
    d.permission_scope = list_field(t, "permission_scope", where);
    if (t.contains("provenance")) d.provenance = provenance_from(t.at("provenance"), where);
    a.tools.push_back(std::move(d));
  }
  for (const auto& s : array_field(j, "skills", where)) {
    SkillDecl d;
    d.skill_name = str_field(s, "skill_name", true, where);
    d.declared_function = str_field(s, "declared_function", false, where);
    d.implementation_summary = str_field(s, "implementation_summary", false, where);
    if (s.contains("provenance")) d.provenance = provenance_from(s.at("provenance"), where);
    a.skills.push_back(std::move(d));
  }
  for (const auto& m : array_field(j, "memory_stores", where)) {
    a.memory_stores.push_back({str_field(m, "store_id", true, where), str_field(m, "type", false, where)});
  }
  for (const auto& c : array_field(j, "code_dependencies", where)) {
    CodeDependency d;
    d.name = str_field(c, "name", true, where);
    d.version = str_field(c, "version", false, where);
    if (c.contains("provenance")) d.provenance = provenance_from(c.at("provenance"), where);
    a.code_dependencies.push_back(std::move(d));
  }
  auto unique = [&](const auto& items, auto name_of, const char* what) {
    std::set<std::string> seen;
    for (const auto& item : items) {
      if (name_of(item).empty()) manifest_error(where + ": empty " + what + " name");
      if (!seen.insert(name_of(item)).second) {
        manifest_error(where + ": " + what + " '" + name_of(item) + "' declared twice");
      }
    }
  };
  unique(a.tools, [](const ToolDecl& d) { return d.tool_name; }, "tool");
  unique(a.skills, [](const SkillDecl& d) { return d.skill_name; }, "skill");
  unique(a.memory_stores, [](const MemoryStoreDecl& d) { return d.store_id; }, "memory store");
  unique(a.code_dependencies, [](const CodeDependency& d) { return d.name; }, "code dependency");
  return a;
}

[[noreturn]] void event_error(const std::string& msg) { throw Error(ErrorCode::EventParseError, msg); }

}  // namespace

std::string_view to_string(EventType t) noexcept {
  for (const auto& [type, name] : kEventNames) {
    if (type == t) return name;
  }
  return "";
}

std::optional<EventType> parse_event_type(std::string_view name) noexcept {
  for (const auto& [type, n] : kEventNames) {
    if (n == name) return type;
  }
  return std::nullopt;
}

CapabilityManifest manifest_from_json(const Json& doc) {
  if (!doc.is_object()) manifest_error("manifest must be a JSON object");
  const Json& agents = array_field(doc, "agents", "manifest");
  if (agents.empty()) manifest_error("manifest declares no agents");
  CapabilityManifest m;
  std::set<std::string> ids;
  for (const auto& a : agents) {
    m.agents.push_back(agent_from(a));
    if (!ids.insert(m.agents.back().agent_id).second) {
      manifest_error("agent '" + m.agents.back().agent_id + "' declared twice");
    }
  }
  return m;
}

Json manifest_to_json(const CapabilityManifest& m) {
  Json agents = Json::array();
  for (const auto& a : m.agents) {
    Json j = {{"agent_id", a.agent_id}, {"role", a.role}};
    if (!a.policy_boundary.empty()) j["policy_boundary"] = a.policy_boundary;
    if (a.system_prompt) {
      Json p = {{"content", a.system_prompt->content}};
      put_provenance(p, a.system_prompt->provenance);
      j["system_prompt"] = p;
    }
    if (a.model) j["model"] = {{"name", a.model->name}, {"provider", a.model->provider}};
    j["tools"] = Json::array();
    for (const auto& t : a.tools) {
      Json p = Json::object();
      put_provenance(p, t.provenance);
      j["tools"].push_back({{"tool_name", t.tool_name},
                            {"input_schema", t.input_schema},
                            {"permission_scope", t.permission_scope},
                            {"provenance", p}});
    }
    j["skills"] = Json::array();
    for (const auto& s : a.skills) {
      Json p = Json::object();
      put_provenance(p, s.provenance);
      j["skills"].push_back({{"skill_name", s.skill_name},
                             {"declared_function", s.declared_function},
                             {"implementation_summary", s.implementation_summary},
                             {"provenance", p}});
    }
    j["memory_stores"] = Json::array();
    for (const auto& s : a.memory_stores) j["memory_stores"].push_back({{"store_id", s.store_id}, {"type", s.type}});
    j["code_dependencies"] = Json::array();
    for (const auto& c : a.code_dependencies) {
      Json p = Json::object();
      put_provenance(p, c.provenance);
      j["code_dependencies"].push_back({{"name", c.name}, {"version", c.version}, {"provenance", p}});
    }
    agents.push_back(std::move(j));
  }
  return {{"agents", agents}};
}

CapabilityManifest parse_manifest(std::string_view text) {
  Json doc = Json::parse(text, nullptr, false);
  if (doc.is_discarded()) manifest_error("manifest is not valid JSON");
  return manifest_from_json(doc);
}

TraceEvent event_from_json(const Json& doc) {
  if (!doc.is_object()) event_error("event must be a JSON object");
  auto req = [&](const char* key) {
    if (!doc.contains(key) || !doc.at(key).is_string()) event_error(std::string("event missing string '") + key + "'");
    return doc.at(key).get<std::string>();
  };
  TraceEvent e;
  e.event_id = req("event_id");
  e.trace_id = req("trace_id");
  e.agent_id = req("agent_id");
  e.timestamp = req("timestamp");
  if (!parse_instant_ms(e.timestamp)) event_error("event '" + e.event_id + "' has a malformed timestamp");
  auto type_name = req("event_type");
  auto type = parse_event_type(type_name);
  if (!type) event_error("event '" + e.event_id + "' has unknown event_type '" + type_name + "'");
  e.event_type = *type;
  if (doc.contains("content")) {
    if (!doc.at("content").is_string()) event_error("event '" + e.event_id + "' content must be a string");
    e.content = doc.at("content").get<std::string>();
  }
  if (doc.contains("refs")) {
    if (!doc.at("refs").is_array()) event_error("event '" + e.event_id + "' refs must be a list");
    for (const auto& r : doc.at("refs")) {
      if (!r.is_string()) event_error("event '" + e.event_id + "' refs must hold strings");
      e.refs.push_back(r.get<std::string>());
    }
  }
  if (doc.contains("attrs")) {
    try {
      e.attrs = attributes_from_json(doc.at("attrs"));
    } catch (const Error& err) {
      event_error("event '" + e.event_id + "': " + err.what());
    }
  }
  return e;
}

Json event_to_json(const TraceEvent& e) {
  Json j = {{"event_id", e.event_id}, {"trace_id", e.trace_id},   {"agent_id", e.agent_id},
            {"timestamp", e.timestamp}, {"event_type", to_string(e.event_type)}};
  if (!e.content.empty()) j["content"] = e.content;
  if (!e.refs.empty()) j["refs"] = e.refs;
  if (!e.attrs.empty()) j["attrs"] = attributes_to_json(e.attrs);
  return j;
}

std::vector<TraceEvent> parse_trace_jsonl(std::string_view text) {
  std::vector<TraceEvent> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json doc = Json::parse(line, nullptr, false);
    if (doc.is_discarded()) event_error("trace line " + std::to_string(line_no) + " is not valid JSON");
    out.push_back(event_from_json(doc));
  }
  return out;
}

std::string write_trace_jsonl(const std::vector<TraceEvent>& events) {
  std::string out;
  for (const auto& e : events) out += event_to_json(e).dump() + "\n";
  return out;
}

}  // namespace agentbom
