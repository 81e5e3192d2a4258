#include "agentbom/traversal.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "agentbom/serialize.hpp"

namespace agentbom {

namespace {

bool node_token_known(const std::string& t) {
  return parse_node_kind(t) || t == "static" || t == "runtime" || t == "auxiliary";
}

bool node_kind_allowed(const Node& n, const StringList& tokens) {
  if (tokens.empty()) return true;
  for (const auto& t : tokens) {
    if (t == to_string(n.kind) || t == to_string(n.layer())) return true;
  }
  return false;
}

class Search {
 public:
  Search(const AgentBomGraph& g, const PathSpec& spec, const Element& entry, std::string start)
      : start_(std::move(start)), graph_(g), spec_(spec), ctx_{g, entry} {
    for (const auto& t : spec.allowed_edge_kinds) {
      for (EdgeKind k : expand_edge_kinds(t)) {
        if (spec.cross_agent || family_of(k) != EdgeFamily::Propagation) kinds_.insert(k);
      }
    }
  }

  std::vector<AuditPath> run() {
    on_path_.insert(start_);
    if (spec_.include_start) emit_start_if_terminal();
    descend(start_, instant_of(start_));
    std::sort(results_.begin(), results_.end(), path_less);
    return std::move(results_);
  }

 private:
  std::optional<std::int64_t> instant_of(const std::string& node_id) const {
    const Node& n = graph_.node(node_id);
    if (!n.timestamp) return std::nullopt;
    return parse_instant_ms(*n.timestamp);
  }

  void emit_start_if_terminal() {
    if (!evaluate(spec_.terminal_predicate, Element{&graph_.node(start_), nullptr}, ctx_)) return;
    results_.push_back(AuditPath{spec_.direction, {start_}});
  }

  void descend(const std::string& at, std::optional<std::int64_t> last_instant) {
    if (static_cast<int>(stack_.size() / 2) >= spec_.max_depth) return;
    const bool forward = spec_.direction == Direction::Forward;
    auto visit = [&](const std::string& edge_id, bool outgoing) {
      const Edge& e = graph_.edge(edge_id);
      if (!kinds_.count(e.kind)) return;
      // Along the flow when the edge's flow direction matches the search direction.
      const bool along = outgoing != flow_reversed(e.kind);
      if (along != forward) return;
      const std::string& next = outgoing ? e.target : e.source;
      if (on_path_.count(next)) return;
      auto instant = last_instant;
      if (spec_.temporal) {
        if (auto t = instant_of(next)) {
          if (last_instant && (forward ? *t < *last_instant : *t > *last_instant)) return;
          instant = t;
        }
      }
      stack_.insert(stack_.begin(), edge_id);
      stack_.insert(stack_.begin(), next);
      on_path_.insert(next);
      emit_reached();
      if (node_kind_allowed(graph_.node(next), spec_.allowed_node_kinds)) descend(next, instant);
      on_path_.erase(next);
      stack_.erase(stack_.begin(), stack_.begin() + 2);
    };
    for (const auto& id : graph_.out_edges(at)) visit(id, true);
    for (const auto& id : graph_.in_edges(at)) visit(id, false);
  }

  // stack_ holds [reached, edge, node, edge, ..., node-after-start] and the
  // start node is implicit at the end.
  void emit_reached() {
    const std::string& reached = stack_.front();
    if (!evaluate(spec_.terminal_predicate, Element{&graph_.node(reached), nullptr}, ctx_)) return;
    AuditPath p;
    p.direction = spec_.direction;
    p.elements = stack_;
    p.elements.push_back(start_);
    if (spec_.direction == Direction::Forward) std::reverse(p.elements.begin(), p.elements.end());
    results_.push_back(std::move(p));
  }

 private:
  std::string start_;
  const AgentBomGraph& graph_;
  const PathSpec& spec_;
  EvalContext ctx_;
  std::set<EdgeKind> kinds_;
  std::set<std::string> on_path_;
  std::vector<std::string> stack_;
  std::vector<AuditPath> results_;
};

}  // namespace

std::string_view to_string(Direction d) noexcept {
  return d == Direction::Backward ? "backward" : "forward";
}

void check_path_spec(const PathSpec& spec) {
  if (spec.max_depth < 1) throw Error(ErrorCode::InvalidPathSpec, "max_depth must be at least 1");
  if (spec.allowed_edge_kinds.empty()) {
    throw Error(ErrorCode::InvalidPathSpec, "allowed_edge_kinds must be non-empty");
  }
  for (const auto& t : spec.allowed_edge_kinds) {
    if (expand_edge_kinds(t).empty()) throw Error(ErrorCode::InvalidPathSpec, "unknown edge kind '" + t + "'");
  }
  for (const auto& t : spec.allowed_node_kinds) {
    if (!node_token_known(t)) throw Error(ErrorCode::InvalidPathSpec, "unknown node kind '" + t + "'");
  }
}

bool path_less(const AuditPath& a, const AuditPath& b) {
  if (a.depth() != b.depth()) return a.depth() < b.depth();
  return a.elements < b.elements;
}

std::vector<AuditPath> trace(const AgentBomGraph& graph, std::string_view start, const PathSpec& spec) {
  return trace(graph, start, spec, resolve_element(graph, start));
}

std::vector<AuditPath> trace(const AgentBomGraph& graph, std::string_view start, const PathSpec& spec,
                             const Element& entry) {
  check_path_spec(spec);
  std::string node_id;
  if (graph.find_node(start)) {
    node_id = std::string(start);
  } else if (const Edge* e = graph.find_edge(start)) {
    const bool reversed = flow_reversed(e->kind);
    const bool backward = spec.direction == Direction::Backward;
    // upstream endpoint for backward, downstream for forward
    node_id = (backward != reversed) ? e->source : e->target;
  } else {
    throw Error(ErrorCode::UnknownStart, "start '" + std::string(start) + "' is not in the graph");
  }
  return Search(graph, spec, entry, std::move(node_id)).run();
}

AgentBomGraph subgraph(const AgentBomGraph& graph, const std::vector<AuditPath>& paths,
                       const std::vector<std::string>& extra) {
  std::set<std::string> node_ids;
  std::set<std::string> edge_ids;
  auto take = [&](const std::string& id) {
    if (graph.find_node(id)) {
      node_ids.insert(id);
    } else if (const Edge* e = graph.find_edge(id)) {
      edge_ids.insert(id);
      node_ids.insert(e->source);
      node_ids.insert(e->target);
    } else {
      throw Error(ErrorCode::UnknownElement, "element '" + id + "' is not in the graph");
    }
  };
  for (const auto& p : paths) {
    for (const auto& id : p.elements) take(id);
  }
  for (const auto& id : extra) take(id);

  std::set<std::string> agent_ids;
  Json nodes = Json::array();
  for (const auto& id : node_ids) {
    Node n = graph.node(id);
    if (n.agent_id) agent_ids.insert(*n.agent_id);
    for (const char* key : {"basis", "parameter_source"}) {
      auto it = n.attributes.find(key);
      if (it == n.attributes.end()) continue;
      StringList kept;
      for (const auto& ref : list_attribute(n.attributes, key)) {
        if (node_ids.count(ref)) kept.push_back(ref);
      }
      it->second = kept;
    }
    if (auto src = text_attribute(n.attributes, "source");
        src && looks_like_node_reference(*src) && !node_ids.count(*src)) {
      n.attributes.erase("source");
    }
    nodes.push_back({{"id", n.id}, {"kind", to_string(n.kind)}, {"attributes", attributes_to_json(n.attributes)}});
    if (n.agent_id) nodes.back()["agent_id"] = *n.agent_id;
    if (n.trace_id) nodes.back()["trace_id"] = *n.trace_id;
    if (n.timestamp) nodes.back()["timestamp"] = *n.timestamp;
  }
  Json agents = Json::array();
  for (const auto& id : agent_ids) {
    const auto& a = graph.agents().at(id);
    agents.push_back({{"agent_id", a.agent_id}, {"role", a.role}, {"policy_boundary", a.policy_boundary}});
  }
  Json edges = Json::array();
  for (const auto& id : edge_ids) {
    const Edge& e = graph.edge(id);
    Json j = {{"id", e.id}, {"kind", to_string(e.kind)}, {"source", e.source}, {"target", e.target},
              {"attributes", attributes_to_json(e.attributes)}};
    if (e.trace_id) j["trace_id"] = *e.trace_id;
    if (e.timestamp) j["timestamp"] = *e.timestamp;
    edges.push_back(std::move(j));
  }
  return graph_from_json({{"agents", agents}, {"nodes", nodes}, {"edges", edges}});
}

}  // namespace agentbom
