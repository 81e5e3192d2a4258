#include "agentbom/predicate.hpp"

#include <algorithm>

namespace agentbom {

namespace {

std::string join(const StringList& values) {
  std::string out;
  for (const auto& v : values) out += (out.empty() ? "" : ",") + v;
  return out;
}

std::string_view kind_name(const Element& el) {
  return el.node ? to_string(el.node->kind) : to_string(el.edge->kind);
}

bool kind_matches(const Element& el, const StringList& tokens) {
  for (const auto& t : tokens) {
    if (t == kind_name(el)) return true;
    if (el.node && t == to_string(el.node->layer())) return true;
    if (el.edge) {
      auto kinds = expand_edge_kinds(t);
      if (std::find(kinds.begin(), kinds.end(), el.edge->kind) != kinds.end()) return true;
    }
  }
  return false;
}

std::optional<StringList> compare_operand(const Predicate& p, const EvalContext& ctx) {
  if (!p.operand_ref) return p.operand;
  std::string_view ref = *p.operand_ref;
  constexpr std::string_view kPrefix = "entry.";
  if (!ref.starts_with(kPrefix) || !ctx.entry.valid()) return std::nullopt;
  return lookup(ctx.entry, ref.substr(kPrefix.size()));
}

bool compare(const Predicate& p, const Element& el, const EvalContext& ctx) {
  auto lhs = lookup(el, p.key);
  if (!lhs) return false;
  if (p.cmp == Predicate::Cmp::Present) {
    return std::any_of(lhs->begin(), lhs->end(), [](const auto& s) { return !s.empty(); });
  }
  auto rhs = compare_operand(p, ctx);
  if (!rhs) return false;
  switch (p.cmp) {
    case Predicate::Cmp::Eq: return *lhs == *rhs;
    case Predicate::Cmp::Ne: return *lhs != *rhs;
    case Predicate::Cmp::Contains:
      if (rhs->empty()) return false;
      return std::any_of(lhs->begin(), lhs->end(), [&](const std::string& s) {
        return s.find(rhs->front()) != std::string::npos;
      });
    case Predicate::Cmp::Intersects:
      return std::any_of(lhs->begin(), lhs->end(), [&](const std::string& s) {
        return std::find(rhs->begin(), rhs->end(), s) != rhs->end();
      });
    case Predicate::Cmp::Present: break;
  }
  return false;
}

// Calls fn(neighbor_node_id) for each qualifying neighbour until fn returns true.
template <typename Fn>
bool any_neighbor(const Predicate& p, const Element& el, const EvalContext& ctx, Fn fn) {
  if (!el.node) return false;
  std::vector<EdgeKind> kinds;
  for (const auto& t : p.names) {
    auto expanded = expand_edge_kinds(t);
    kinds.insert(kinds.end(), expanded.begin(), expanded.end());
  }
  const auto& ids = p.outgoing ? ctx.graph.out_edges(el.node->id) : ctx.graph.in_edges(el.node->id);
  for (const auto& eid : ids) {
    const Edge& e = ctx.graph.edge(eid);
    if (!kinds.empty() && std::find(kinds.begin(), kinds.end(), e.kind) == kinds.end()) continue;
    if (fn(p.outgoing ? e.target : e.source)) return true;
  }
  return false;
}

template <typename Fn>
bool any_reference(const Predicate& p, const Element& el, const EvalContext& ctx, Fn fn) {
  for (const auto& key : p.names) {
    for (const auto& ref : list_attribute(el.attributes(), key)) {
      if (ctx.graph.find_node(ref) && fn(key, ref)) return true;
    }
  }
  return false;
}

std::string_view cmp_name(Predicate::Cmp c) {
  switch (c) {
    case Predicate::Cmp::Eq: return "==";
    case Predicate::Cmp::Ne: return "!=";
    case Predicate::Cmp::Contains: return "contains";
    case Predicate::Cmp::Intersects: return "intersects";
    case Predicate::Cmp::Present: return "present";
  }
  return "";
}

Predicate::Cmp parse_cmp(const std::string& s) {
  if (s == "==") return Predicate::Cmp::Eq;
  if (s == "!=") return Predicate::Cmp::Ne;
  if (s == "contains") return Predicate::Cmp::Contains;
  if (s == "intersects") return Predicate::Cmp::Intersects;
  if (s == "present") return Predicate::Cmp::Present;
  throw Error(ErrorCode::RuleParseError, "unknown comparison operator '" + s + "'");
}

StringList string_list(const nlohmann::json& j, const char* what) {
  if (j.is_string()) return {j.get<std::string>()};
  if (!j.is_array()) throw Error(ErrorCode::RuleParseError, std::string(what) + " must be a list");
  StringList out;
  for (const auto& v : j) {
    if (!v.is_string()) throw Error(ErrorCode::RuleParseError, std::string(what) + " must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

Predicate make_compare(std::string key, Predicate::Cmp cmp, StringList operand,
                       std::optional<std::string> ref = std::nullopt) {
  Predicate p;
  p.op = Predicate::Op::Compare;
  p.key = std::move(key);
  p.cmp = cmp;
  p.operand = std::move(operand);
  p.operand_ref = std::move(ref);
  return p;
}

}  // namespace

const std::string& Element::id() const { return node ? node->id : edge->id; }

const AttributeMap& Element::attributes() const { return node ? node->attributes : edge->attributes; }

Element resolve_element(const AgentBomGraph& graph, std::string_view id) {
  if (const Node* n = graph.find_node(id)) return {n, nullptr};
  if (const Edge* e = graph.find_edge(id)) return {nullptr, e};
  return {};
}

std::optional<StringList> lookup(const Element& el, std::string_view key) {
  if (!el.valid()) return std::nullopt;
  if (key == "id") return StringList{el.id()};
  if (key == "kind") return StringList{std::string(kind_name(el))};
  if (key == "layer") {
    if (!el.node) return std::nullopt;
    return StringList{std::string(to_string(el.node->layer()))};
  }
  if (key == "family") {
    if (!el.edge) return std::nullopt;
    return StringList{std::string(to_string(el.edge->family()))};
  }
  if (key == "agent_id" && el.node && el.node->agent_id) return StringList{*el.node->agent_id};
  if (key == "trace_id") {
    const auto& t = el.node ? el.node->trace_id : el.edge->trace_id;
    if (t) return StringList{*t};
  }
  if (key == "timestamp") {
    const auto& t = el.node ? el.node->timestamp : el.edge->timestamp;
    if (t) return StringList{*t};
  }
  const auto& attrs = el.attributes();
  auto it = attrs.find(std::string(key));
  if (it == attrs.end()) return std::nullopt;
  return value_strings(it->second);
}

bool evaluate(const Predicate& p, const Element& el, const EvalContext& ctx) {
  if (!el.valid()) return false;
  switch (p.op) {
    case Predicate::Op::True: return true;
    case Predicate::Op::Compare: return compare(p, el, ctx);
    case Predicate::Op::HasFlag: {
      auto flags = list_attribute(el.attributes(), "danger_flags");
      if (p.names.empty()) return !flags.empty();
      return std::any_of(flags.begin(), flags.end(), [&](const std::string& f) {
        return std::find(p.names.begin(), p.names.end(), f) != p.names.end();
      });
    }
    case Predicate::Op::KindIn: return kind_matches(el, p.names);
    case Predicate::Op::Neighbor:
      return any_neighbor(p, el, ctx, [&](const std::string& id) {
        return p.children.empty() || evaluate(p.children.front(), resolve_element(ctx.graph, id), ctx);
      });
    case Predicate::Op::RefsAny:
      return any_reference(p, el, ctx, [&](const std::string&, const std::string& id) {
        return p.children.empty() || evaluate(p.children.front(), resolve_element(ctx.graph, id), ctx);
      });
    case Predicate::Op::And:
      return std::all_of(p.children.begin(), p.children.end(),
                         [&](const Predicate& c) { return evaluate(c, el, ctx); });
    case Predicate::Op::Or:
      return std::any_of(p.children.begin(), p.children.end(),
                         [&](const Predicate& c) { return evaluate(c, el, ctx); });
    case Predicate::Op::Not:
      return !p.children.empty() && !evaluate(p.children.front(), el, ctx);
  }
  return false;
}

std::pair<std::string, std::string> explain(const Predicate& p, const Element& el,
                                            const EvalContext& ctx) {
  std::pair<std::string, std::string> fallback{"kind", std::string(kind_name(el))};
  switch (p.op) {
    case Predicate::Op::Compare: {
      auto v = lookup(el, p.key);
      return {p.key, v ? join(*v) : ""};
    }
    case Predicate::Op::HasFlag:
      return {"danger_flags", join(list_attribute(el.attributes(), "danger_flags"))};
    case Predicate::Op::Neighbor: {
      std::pair<std::string, std::string> out = fallback;
      any_neighbor(p, el, ctx, [&](const std::string& id) {
        bool ok = p.children.empty() || evaluate(p.children.front(), resolve_element(ctx.graph, id), ctx);
        if (ok) out = {p.outgoing ? "out_neighbor" : "in_neighbor", id};
        return ok;
      });
      return out;
    }
    case Predicate::Op::RefsAny: {
      std::pair<std::string, std::string> out = fallback;
      any_reference(p, el, ctx, [&](const std::string& key, const std::string& id) {
        bool ok = p.children.empty() || evaluate(p.children.front(), resolve_element(ctx.graph, id), ctx);
        if (ok) out = {key, id};
        return ok;
      });
      return out;
    }
    case Predicate::Op::And:
      for (const auto& c : p.children) {
        if (c.op != Predicate::Op::KindIn && c.op != Predicate::Op::True) return explain(c, el, ctx);
      }
      return fallback;
    case Predicate::Op::Or:
      for (const auto& c : p.children) {
        if (evaluate(c, el, ctx)) return explain(c, el, ctx);
      }
      return fallback;
    case Predicate::Op::Not:
      if (!p.children.empty() && p.children.front().op == Predicate::Op::Compare) {
        auto v = lookup(el, p.children.front().key);
        return {p.children.front().key, v ? join(*v) : ""};
      }
      return fallback;
    case Predicate::Op::True:
    case Predicate::Op::KindIn:
      return fallback;
  }
  return fallback;
}

nlohmann::json predicate_to_json(const Predicate& p) {
  using nlohmann::json;
  auto children = [&] {
    json arr = json::array();
    for (const auto& c : p.children) arr.push_back(predicate_to_json(c));
    return arr;
  };
  switch (p.op) {
    case Predicate::Op::True: return {{"true", true}};
    case Predicate::Op::Compare: {
      json c = {{"key", p.key}, {"op", cmp_name(p.cmp)}};
      if (p.operand_ref) {
        c["ref"] = *p.operand_ref;
      } else if (p.cmp != Predicate::Cmp::Present) {
        c["value"] = p.operand.size() == 1 && p.cmp != Predicate::Cmp::Intersects
                         ? json(p.operand.front())
                         : json(p.operand);
      }
      return {{"cmp", c}};
    }
    case Predicate::Op::HasFlag: return {{"has_flag", p.names}};
    case Predicate::Op::KindIn: return {{"kind_in", p.names}};
    case Predicate::Op::Neighbor: {
      json n = {{"direction", p.outgoing ? "out" : "in"}, {"edges", p.names}};
      if (!p.children.empty()) n["where"] = predicate_to_json(p.children.front());
      return {{"neighbor", n}};
    }
    case Predicate::Op::RefsAny: {
      json r = {{"keys", p.names}};
      if (!p.children.empty()) r["where"] = predicate_to_json(p.children.front());
      return {{"refs_any", r}};
    }
    case Predicate::Op::And: return {{"and", children()}};
    case Predicate::Op::Or: return {{"or", children()}};
    case Predicate::Op::Not: return {{"not", predicate_to_json(p.children.front())}};
  }
  return {{"true", true}};
}

Predicate predicate_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.size() != 1) {
    throw Error(ErrorCode::RuleParseError, "predicate must be an object with exactly one operator");
  }
  const auto& [name, body] = *j.items().begin();
  Predicate p;
  if (name == "true") return pred::always();
  if (name == "cmp") {
    if (!body.is_object() || !body.contains("key") || !body.contains("op")) {
      throw Error(ErrorCode::RuleParseError, "cmp needs key and op");
    }
    auto cmp = parse_cmp(body.at("op").get<std::string>());
    std::optional<std::string> ref;
    StringList operand;
    if (body.contains("ref")) {
      ref = body.at("ref").get<std::string>();
    } else if (body.contains("value")) {
      operand = string_list(body.at("value"), "cmp value");
    } else if (cmp != Predicate::Cmp::Present) {
      throw Error(ErrorCode::RuleParseError, "cmp needs value or ref");
    }
    return make_compare(body.at("key").get<std::string>(), cmp, std::move(operand), std::move(ref));
  }
  if (name == "has_flag") return pred::has_flag(string_list(body, "has_flag"));
  if (name == "kind_in") {
    auto tokens = string_list(body, "kind_in");
    for (const auto& t : tokens) {
      if (!parse_node_kind(t) && expand_edge_kinds(t).empty() && t != "static" && t != "runtime" &&
          t != "auxiliary") {
        throw Error(ErrorCode::UnknownKind, "unknown kind token '" + t + "'");
      }
    }
    return pred::kind_in(std::move(tokens));
  }
  if (name == "neighbor") {
    auto dir = body.value("direction", "in");
    if (dir != "in" && dir != "out") throw Error(ErrorCode::RuleParseError, "neighbor direction must be in|out");
    auto where = body.contains("where") ? predicate_from_json(body.at("where")) : pred::always();
    auto edges = string_list(body.value("edges", nlohmann::json::array()), "neighbor edges");
    for (const auto& e : edges) {
      if (expand_edge_kinds(e).empty()) throw Error(ErrorCode::UnknownKind, "unknown edge kind '" + e + "'");
    }
    return dir == "out" ? pred::out_neighbor(std::move(edges), std::move(where))
                        : pred::in_neighbor(std::move(edges), std::move(where));
  }
  if (name == "refs_any") {
    auto where = body.contains("where") ? predicate_from_json(body.at("where")) : pred::always();
    return pred::refs_any(string_list(body.at("keys"), "refs_any keys"), std::move(where));
  }
  if (name == "and" || name == "or") {
    if (!body.is_array()) throw Error(ErrorCode::RuleParseError, name + " needs a list");
    std::vector<Predicate> children;
    for (const auto& c : body) children.push_back(predicate_from_json(c));
    return name == "and" ? pred::all_of(std::move(children)) : pred::any_of(std::move(children));
  }
  if (name == "not") return pred::negate(predicate_from_json(body));
  throw Error(ErrorCode::RuleParseError, "unknown predicate operator '" + name + "'");
}

namespace pred {

Predicate always() { return Predicate{}; }

Predicate eq(std::string key, std::string value) {
  return make_compare(std::move(key), Predicate::Cmp::Eq, {std::move(value)});
}

Predicate ne(std::string key, std::string value) {
  return make_compare(std::move(key), Predicate::Cmp::Ne, {std::move(value)});
}

Predicate contains(std::string key, std::string value) {
  return make_compare(std::move(key), Predicate::Cmp::Contains, {std::move(value)});
}

Predicate intersects(std::string key, StringList values) {
  return make_compare(std::move(key), Predicate::Cmp::Intersects, std::move(values));
}

Predicate present(std::string key) { return make_compare(std::move(key), Predicate::Cmp::Present, {}); }

Predicate eq_entry(std::string key, std::string entry_key) {
  return make_compare(std::move(key), Predicate::Cmp::Eq, {}, "entry." + entry_key);
}

Predicate ne_entry(std::string key, std::string entry_key) {
  return make_compare(std::move(key), Predicate::Cmp::Ne, {}, "entry." + entry_key);
}

Predicate intersects_entry(std::string key, std::string entry_key) {
  return make_compare(std::move(key), Predicate::Cmp::Intersects, {}, "entry." + entry_key);
}

Predicate has_flag(StringList flags) {
  Predicate p;
  p.op = Predicate::Op::HasFlag;
  p.names = std::move(flags);
  return p;
}

Predicate kind_in(StringList tokens) {
  Predicate p;
  p.op = Predicate::Op::KindIn;
  p.names = std::move(tokens);
  return p;
}

Predicate in_neighbor(StringList edge_kinds, Predicate where) {
  Predicate p;
  p.op = Predicate::Op::Neighbor;
  p.names = std::move(edge_kinds);
  p.children.push_back(std::move(where));
  return p;
}

Predicate out_neighbor(StringList edge_kinds, Predicate where) {
  Predicate p = in_neighbor(std::move(edge_kinds), std::move(where));
  p.outgoing = true;
  return p;
}

Predicate refs_any(StringList keys, Predicate where) {
  Predicate p;
  p.op = Predicate::Op::RefsAny;
  p.names = std::move(keys);
  p.children.push_back(std::move(where));
  return p;
}

Predicate all_of(std::vector<Predicate> children) {
  Predicate p;
  p.op = Predicate::Op::And;
  p.children = std::move(children);
  return p;
}

Predicate any_of(std::vector<Predicate> children) {
  Predicate p;
  p.op = Predicate::Op::Or;
  p.children = std::move(children);
  return p;
}

Predicate negate(Predicate child) {
  Predicate p;
  p.op = Predicate::Op::Not;
  p.children.push_back(std::move(child));
  return p;
}

}  // namespace pred

}  // namespace agentbom
