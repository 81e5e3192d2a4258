#include "agentbom/graph.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>

namespace agentbom {

namespace {

const std::vector<std::string> kNoEdges;

int parse_int(std::string_view s, bool& ok) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  ok = ok && ec == std::errc{} && p == s.data() + s.size();
  return v;
}

bool shared_marker(const AttributeMap& attrs) {
  auto v = text_attribute(attrs, "shared_state");
  return v && !v->empty();
}

}  // namespace

StringList value_strings(const AttributeValue& value) {
  return std::visit(
      [](const auto& v) -> StringList {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return {v};
        } else if constexpr (std::is_same_v<T, bool>) {
          return {v ? "true" : "false"};
        } else if constexpr (std::is_same_v<T, StringList>) {
          return v;
        } else {
          StringList out;
          for (const auto& [k, val] : v) out.push_back(val);
          return out;
        }
      },
      value);
}

std::optional<std::string> text_attribute(const AttributeMap& attrs, std::string_view key) {
  auto it = attrs.find(std::string(key));
  if (it == attrs.end()) return std::nullopt;
  if (const auto* s = std::get_if<std::string>(&it->second)) return *s;
  return std::nullopt;
}

StringList list_attribute(const AttributeMap& attrs, std::string_view key) {
  auto it = attrs.find(std::string(key));
  if (it == attrs.end()) return {};
  return value_strings(it->second);
}

std::optional<std::int64_t> parse_instant_ms(std::string_view t) {
  // YYYY-MM-DDTHH:MM:SS[.fff]Z
  if (t.size() < 20 || t.back() != 'Z') return std::nullopt;
  if (t[4] != '-' || t[7] != '-' || t[10] != 'T' || t[13] != ':' || t[16] != ':') {
    return std::nullopt;
  }
  bool ok = true;
  int year = parse_int(t.substr(0, 4), ok);
  int month = parse_int(t.substr(5, 2), ok);
  int day = parse_int(t.substr(8, 2), ok);
  int hour = parse_int(t.substr(11, 2), ok);
  int minute = parse_int(t.substr(14, 2), ok);
  int second = parse_int(t.substr(17, 2), ok);
  int millis = 0;
  std::string_view rest = t.substr(19, t.size() - 20);
  if (!rest.empty()) {
    if (rest.front() != '.' || rest.size() < 2 || rest.size() > 4) return std::nullopt;
    std::string frac(rest.substr(1));
    while (frac.size() < 3) frac += '0';
    millis = parse_int(frac, ok);
  }
  if (!ok || hour > 23 || minute > 59 || second > 60) return std::nullopt;
  using namespace std::chrono;
  year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                     std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok()) return std::nullopt;
  auto days = sys_days{ymd}.time_since_epoch();
  auto total = duration_cast<milliseconds>(days) + hours{hour} + minutes{minute} +
               seconds{second} + milliseconds{millis};
  return total.count();
}

bool looks_like_node_reference(std::string_view value) {
  if (value.find("://") != std::string_view::npos) return false;
  if (value.find_first_of(" \t\n") != std::string_view::npos) return false;
  auto dot = value.find('.');
  if (dot == std::string_view::npos || dot + 1 >= value.size()) return false;
  auto prefix = value.substr(0, dot);
  return std::any_of(kAllNodeKinds.begin(), kAllNodeKinds.end(),
                     [&](NodeKind k) { return id_prefix(k) == prefix; });
}

std::optional<std::string> check_attributes(const AttributeMap& attrs) {
  for (const auto& [key, value] : attrs) {
    const AttributeSpec* spec = find_attribute(key);
    if (!spec) return "unregistered attribute key '" + key + "'";
    bool type_ok = false;
    switch (spec->type) {
      case ValueType::Text:
      case ValueType::Token:
      case ValueType::Instant:
        type_ok = std::holds_alternative<std::string>(value);
        break;
      case ValueType::Bool: type_ok = std::holds_alternative<bool>(value); break;
      case ValueType::StringList: type_ok = std::holds_alternative<StringList>(value); break;
      case ValueType::KeyValueMap: type_ok = std::holds_alternative<KeyValueMap>(value); break;
    }
    if (!type_ok) {
      return "attribute '" + key + "' must be " + std::string(to_string(spec->type));
    }
    if (spec->type == ValueType::Token) {
      const auto& token = std::get<std::string>(value);
      if (std::find(spec->tokens.begin(), spec->tokens.end(), token) == spec->tokens.end()) {
        return "attribute '" + key + "' does not accept token '" + token + "'";
      }
    }
    if (spec->type == ValueType::Instant && !parse_instant_ms(std::get<std::string>(value))) {
      return "attribute '" + key + "' is not an ISO-8601 instant";
    }
  }
  return std::nullopt;
}

void AgentBomGraph::add_agent(AgentDescriptor agent) {
  if (agent.agent_id.empty()) {
    throw Error(ErrorCode::AttributeSchemaViolation, "agent_id must be non-empty");
  }
  if (agents_.count(agent.agent_id)) {
    throw Error(ErrorCode::DuplicateId, "agent '" + agent.agent_id + "' already registered");
  }
  auto id = agent.agent_id;
  agents_.emplace(std::move(id), std::move(agent));
}

std::vector<SchemaViolation> AgentBomGraph::check_node(const Node& n, bool check_references) const {
  std::vector<SchemaViolation> out;
  auto add = [&](ErrorCode c, std::string msg) { out.push_back({c, n.id, std::move(msg)}); };
  if (n.id.empty()) add(ErrorCode::AttributeSchemaViolation, "node id must be non-empty");
  if (auto problem = check_attributes(n.attributes)) {
    add(ErrorCode::AttributeSchemaViolation, "node '" + n.id + "': " + *problem);
  }
  const Layer layer = n.layer();
  if (layer == Layer::Runtime) {
    if (!n.trace_id || n.trace_id->empty()) {
      add(ErrorCode::MissingTraceId, "runtime node '" + n.id + "' has no trace_id");
    }
    if (!n.timestamp || !parse_instant_ms(*n.timestamp)) {
      add(ErrorCode::MissingTraceId, "runtime node '" + n.id + "' has no valid timestamp");
    }
    if (!n.agent_id) add(ErrorCode::UnknownAgent, "runtime node '" + n.id + "' has no agent_id");
  } else if (layer == Layer::Static) {
    if (n.trace_id) {
      add(ErrorCode::AttributeSchemaViolation, "static node '" + n.id + "' must not carry trace_id");
    }
  }
  if (n.agent_id && !agents_.count(*n.agent_id)) {
    add(ErrorCode::UnknownAgent, "node '" + n.id + "' names unknown agent '" + *n.agent_id + "'");
  }
  if (check_references) {
    for (std::string_view key : {"basis", "parameter_source"}) {
      for (const auto& ref : list_attribute(n.attributes, key)) {
        if (!nodes_.count(ref) && ref != n.id) {
          add(ErrorCode::UnresolvedReference,
              "node '" + n.id + "' " + std::string(key) + " names missing node '" + ref + "'");
        }
      }
    }
    if (auto src = text_attribute(n.attributes, "source");
        src && looks_like_node_reference(*src) && !nodes_.count(*src)) {
      add(ErrorCode::UnresolvedReference,
          "node '" + n.id + "' source names missing node '" + *src + "'");
    }
  }
  return out;
}

std::vector<SchemaViolation> AgentBomGraph::check_edge(const Edge& e) const {
  std::vector<SchemaViolation> out;
  auto add = [&](ErrorCode c, std::string msg) { out.push_back({c, e.id, std::move(msg)}); };
  if (e.id.empty()) add(ErrorCode::AttributeSchemaViolation, "edge id must be non-empty");
  const Node* s = find_node(e.source);
  const Node* t = find_node(e.target);
  if (!s) add(ErrorCode::DanglingEndpoint, "edge '" + e.id + "' source '" + e.source + "' missing");
  if (!t) add(ErrorCode::DanglingEndpoint, "edge '" + e.id + "' target '" + e.target + "' missing");
  if (auto problem = check_attributes(e.attributes)) {
    add(ErrorCode::AttributeSchemaViolation, "edge '" + e.id + "': " + *problem);
  }
  if (e.timestamp && !parse_instant_ms(*e.timestamp)) {
    add(ErrorCode::AttributeSchemaViolation, "edge '" + e.id + "' timestamp is not an instant");
  }
  if (!s || !t) return out;
  if (!endpoint_allowed(e.kind, s->kind, t->kind)) {
    add(ErrorCode::EndpointKindViolation,
        "edge '" + e.id + "' " + std::string(to_string(s->kind)) + " -> " +
            std::string(to_string(t->kind)) + " violates " + describe_endpoint_constraint(e.kind));
  } else if (e.family() == EdgeFamily::Propagation) {
    const bool distinct = s->agent_id && t->agent_id && *s->agent_id != *t->agent_id;
    const bool shared = !s->agent_id || !t->agent_id || shared_marker(s->attributes) ||
                        shared_marker(t->attributes) || shared_marker(e.attributes);
    if (!distinct && !shared) {
      add(ErrorCode::EndpointKindViolation,
          "propagation edge '" + e.id + "' must connect two agents or a shared object");
    }
  }
  return out;
}

const std::string& AgentBomGraph::add_node(Node node) {
  if (nodes_.count(node.id)) {
    throw Error(ErrorCode::DuplicateId, "node '" + node.id + "' already present");
  }
  auto problems = check_node(node, true);
  if (!problems.empty()) throw Error(problems.front().code, problems.front().message);
  auto id = node.id;
  auto [it, _] = nodes_.emplace(std::move(id), std::move(node));
  return it->first;
}

const std::string& AgentBomGraph::add_edge(Edge edge) {
  if (edges_.count(edge.id)) {
    throw Error(ErrorCode::DuplicateId, "edge '" + edge.id + "' already present");
  }
  auto problems = check_edge(edge);
  if (!problems.empty()) throw Error(problems.front().code, problems.front().message);
  out_[edge.source].push_back(edge.id);
  in_[edge.target].push_back(edge.id);
  by_kind_[edge.kind].push_back(edge.id);
  auto id = edge.id;
  auto [it, _] = edges_.emplace(std::move(id), std::move(edge));
  return it->first;
}

std::vector<SchemaViolation> AgentBomGraph::validate() const {
  std::vector<SchemaViolation> out;
  for (const auto& [id, n] : nodes_) {
    auto v = check_node(n, true);
    out.insert(out.end(), v.begin(), v.end());
  }
  std::size_t indexed = 0;
  for (const auto& [id, e] : edges_) {
    auto v = check_edge(e);
    out.insert(out.end(), v.begin(), v.end());
    auto has = [&](const auto& index, const std::string& key) {
      auto it = index.find(key);
      return it != index.end() &&
             std::find(it->second.begin(), it->second.end(), id) != it->second.end();
    };
    auto kind_it = by_kind_.find(e.kind);
    const bool in_kind = kind_it != by_kind_.end() &&
                         std::find(kind_it->second.begin(), kind_it->second.end(), id) !=
                             kind_it->second.end();
    if (!has(out_, e.source) || !has(in_, e.target) || !in_kind) {
      out.push_back({ErrorCode::UnknownElement, id, "edge '" + id + "' missing from indices"});
    }
  }
  for (const auto& [kind, ids] : by_kind_) indexed += ids.size();
  if (indexed != edges_.size()) {
    out.push_back({ErrorCode::UnknownElement, "", "kind index size disagrees with edge store"});
  }
  return out;
}

const Node* AgentBomGraph::find_node(std::string_view id) const {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

const Edge* AgentBomGraph::find_edge(std::string_view id) const {
  auto it = edges_.find(id);
  return it == edges_.end() ? nullptr : &it->second;
}

const Node& AgentBomGraph::node(std::string_view id) const {
  if (const Node* n = find_node(id)) return *n;
  throw Error(ErrorCode::UnknownElement, "no node '" + std::string(id) + "'");
}

const Edge& AgentBomGraph::edge(std::string_view id) const {
  if (const Edge* e = find_edge(id)) return *e;
  throw Error(ErrorCode::UnknownElement, "no edge '" + std::string(id) + "'");
}

bool AgentBomGraph::has_agent(std::string_view agent_id) const {
  return agents_.find(agent_id) != agents_.end();
}

const std::vector<std::string>& AgentBomGraph::out_edges(std::string_view node_id) const {
  auto it = out_.find(node_id);
  return it == out_.end() ? kNoEdges : it->second;
}

const std::vector<std::string>& AgentBomGraph::in_edges(std::string_view node_id) const {
  auto it = in_.find(node_id);
  return it == in_.end() ? kNoEdges : it->second;
}

const std::vector<std::string>& AgentBomGraph::edges_of_kind(EdgeKind kind) const {
  auto it = by_kind_.find(kind);
  return it == by_kind_.end() ? kNoEdges : it->second;
}

std::size_t AgentBomGraph::count(Layer layer) const {
  return static_cast<std::size_t>(std::count_if(
      nodes_.begin(), nodes_.end(), [&](const auto& kv) { return kv.second.layer() == layer; }));
}

}  // namespace agentbom
