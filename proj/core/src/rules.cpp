#include "agentbom/rules.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <set>
#include <tuple>

#include "agentbom/serialize.hpp"

namespace agentbom {

namespace {

struct Group {
  std::optional<std::string> reached;
  std::vector<AuditPath> paths;
};

bool has_scope(const AuditRule& rule, Scope s) {
  return std::any_of(rule.conditions.begin(), rule.conditions.end(),
                     [&](const Clause& c) { return c.scope == s; });
}

// Distinct element ids over a group of paths, in path order.
std::vector<std::string> path_elements(const std::vector<AuditPath>& paths) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& p : paths) {
    for (const auto& id : p.elements) {
      if (seen.insert(id).second) out.push_back(id);
    }
  }
  return out;
}

bool clause_holds_on(const Clause& c, const std::vector<std::string>& scope, const EvalContext& ctx) {
  if (scope.empty()) return false;
  auto ok = [&](const std::string& id) { return evaluate(c.predicate, resolve_element(ctx.graph, id), ctx); };
  return c.quantifier == Quantifier::Forall ? std::all_of(scope.begin(), scope.end(), ok)
                                            : std::any_of(scope.begin(), scope.end(), ok);
}

// Groups paths by the node the search reached and keeps the groups whose
// end and path clauses hold. Without end clauses all paths form one group.
std::vector<Group> adjudicate(const AuditRule& rule, const EvalContext& ctx, std::vector<AuditPath> paths,
                              Scope end_scope, Scope path_scope) {
  const bool by_end = has_scope(rule, end_scope);
  const bool on_path = has_scope(rule, path_scope);
  if (!by_end && !on_path) return {Group{}};
  std::map<std::string, std::vector<AuditPath>> grouped;
  std::vector<Group> candidates;
  if (by_end) {
    for (auto& p : paths) grouped[p.reached()].push_back(std::move(p));
    for (auto& [end, ps] : grouped) candidates.push_back({end, std::move(ps)});
  } else {
    candidates.push_back({std::nullopt, std::move(paths)});
  }
  std::vector<Group> out;
  for (auto& g : candidates) {
    if (g.paths.empty()) continue;
    bool ok = true;
    const auto elements = path_elements(g.paths);
    for (const auto& c : rule.conditions) {
      if (c.scope == end_scope) ok = ok && clause_holds_on(c, {*g.reached}, ctx);
      if (c.scope == path_scope) ok = ok && clause_holds_on(c, elements, ctx);
    }
    if (ok) out.push_back(std::move(g));
  }
  return out;
}

void add_evidence(std::vector<Evidence>& out, std::size_t index, const Clause& c,
                  const std::vector<std::string>& scope, const EvalContext& ctx) {
  for (const auto& id : scope) {
    Element el = resolve_element(ctx.graph, id);
    if (!evaluate(c.predicate, el, ctx)) continue;
    auto [key, value] = explain(c.predicate, el, ctx);
    out.push_back({id, index, std::move(key), std::move(value)});
    if (c.quantifier == Quantifier::Exists) return;
  }
}

void collect_agents(const AgentBomGraph& g, const std::string& id, std::set<std::string>& agents) {
  if (const Node* n = g.find_node(id)) {
    if (n->agent_id) agents.insert(*n->agent_id);
  } else if (const Edge* e = g.find_edge(id)) {
    collect_agents(g, e->source, agents);
    collect_agents(g, e->target, agents);
  }
}

std::optional<std::string> trace_of(const AgentBomGraph& g, const std::string& id) {
  if (const Node* n = g.find_node(id)) return n->trace_id;
  if (const Edge* e = g.find_edge(id)) return e->trace_id;
  return std::nullopt;
}

Finding make_finding(const AuditRule& rule, const EvalContext& ctx, const std::string& entry, const Group& back,
                     const Group& fwd) {
  Finding f;
  f.risk_id = rule.risk_id;
  f.risk_name = rule.name;
  f.entry = entry;
  f.back_origin = back.reached;
  f.fwd_terminus = fwd.reached;
  f.back_paths = back.paths;
  f.fwd_paths = fwd.paths;
  const auto back_elements = path_elements(back.paths);
  const auto fwd_elements = path_elements(fwd.paths);
  for (std::size_t i = 0; i < rule.conditions.size(); ++i) {
    const Clause& c = rule.conditions[i];
    switch (c.scope) {
      case Scope::Entry: add_evidence(f.evidence, i, c, {entry}, ctx); break;
      case Scope::BackOrigin: add_evidence(f.evidence, i, c, {*back.reached}, ctx); break;
      case Scope::BackPath: add_evidence(f.evidence, i, c, back_elements, ctx); break;
      case Scope::FwdTerminus: add_evidence(f.evidence, i, c, {*fwd.reached}, ctx); break;
      case Scope::FwdPath: add_evidence(f.evidence, i, c, fwd_elements, ctx); break;
    }
  }
  f.trace_id = trace_of(ctx.graph, entry);
  for (const auto* elements : {&fwd_elements, &back_elements}) {
    for (const auto& id : *elements) {
      if (!f.trace_id) f.trace_id = trace_of(ctx.graph, id);
    }
  }
  std::set<std::string> agents;
  collect_agents(ctx.graph, entry, agents);
  for (const auto& id : back_elements) collect_agents(ctx.graph, id, agents);
  for (const auto& id : fwd_elements) collect_agents(ctx.graph, id, agents);
  f.agents_involved.assign(agents.begin(), agents.end());
  return f;
}

[[noreturn]] void rule_error(const std::string& msg) { throw Error(ErrorCode::RuleParseError, msg); }

constexpr std::array<std::pair<Scope, std::string_view>, 5> kScopes = {{
    {Scope::Entry, "entry"},
    {Scope::BackOrigin, "back_origin"},
    {Scope::BackPath, "back_path"},
    {Scope::FwdTerminus, "fwd_terminus"},
    {Scope::FwdPath, "fwd_path"},
}};

Json path_to_json(const AuditPath& p) {
  return {{"direction", to_string(p.direction)}, {"elements", p.elements}};
}

Json optional_json(const std::optional<std::string>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

std::string_view to_string(Scope s) noexcept {
  for (const auto& [scope, name] : kScopes) {
    if (scope == s) return name;
  }
  return "";
}

std::string_view to_string(Quantifier q) noexcept { return q == Quantifier::Exists ? "exists" : "forall"; }

void check_rule(const AuditRule& rule) {
  const std::string where = "rule '" + rule.risk_id + "'";
  if (rule.risk_id.empty()) rule_error("rule without risk_id");
  if (rule.conditions.empty()) rule_error(where + " has no conditions");
  if (!has_scope(rule, Scope::Entry)) rule_error(where + " has no entry clause");
  const bool back = has_scope(rule, Scope::BackOrigin) || has_scope(rule, Scope::BackPath);
  const bool fwd = has_scope(rule, Scope::FwdTerminus) || has_scope(rule, Scope::FwdPath);
  if (!back && !fwd) rule_error(where + " has neither a backward nor a forward clause");
  if (rule.entry.kinds.empty()) rule_error(where + " entry selector names no kinds");
  for (const auto& k : rule.entry.kinds) {
    const bool known = rule.entry.element_class == ElementClass::Node
                           ? parse_node_kind(k) || k == "static" || k == "runtime" || k == "auxiliary"
                           : !expand_edge_kinds(k).empty();
    if (!known) rule_error(where + " entry selector has unknown kind '" + k + "'");
  }
  try {
    if (back) check_path_spec(rule.back);
    if (fwd) check_path_spec(rule.fwd);
  } catch (const Error& e) {
    rule_error(where + ": " + e.what());
  }
}

bool finding_less(const Finding& a, const Finding& b) {
  return std::tie(a.risk_id, a.entry, a.back_origin, a.fwd_terminus) <
         std::tie(b.risk_id, b.entry, b.back_origin, b.fwd_terminus);
}

std::vector<std::string> locate_entries(const AgentBomGraph& graph, const AuditRule& rule) {
  std::vector<std::string> out;
  const Predicate kinds = pred::kind_in(rule.entry.kinds);
  auto consider = [&](const std::string& id, Element el) {
    EvalContext ctx{graph, el};
    if (!evaluate(kinds, el, ctx) || !evaluate(rule.entry.predicate, el, ctx)) return;
    for (const auto& c : rule.conditions) {
      if (c.scope == Scope::Entry && !evaluate(c.predicate, el, ctx)) return;
    }
    out.push_back(id);
  };
  if (rule.entry.element_class == ElementClass::Node) {
    for (const auto& [id, n] : graph.nodes()) consider(id, Element{&n, nullptr});
  } else {
    for (const auto& [id, e] : graph.edges()) consider(id, Element{nullptr, &e});
  }
  return out;
}

std::vector<Finding> evaluate_rule(const AgentBomGraph& graph, const AuditRule& rule, RuleStats* stats) {
  check_rule(rule);
  RuleStats local{rule.risk_id};
  std::vector<Finding> out;
  const bool back = has_scope(rule, Scope::BackOrigin) || has_scope(rule, Scope::BackPath);
  const bool fwd = has_scope(rule, Scope::FwdTerminus) || has_scope(rule, Scope::FwdPath);
  for (const auto& entry : locate_entries(graph, rule)) {
    ++local.entries_examined;
    Element el = resolve_element(graph, entry);
    EvalContext ctx{graph, el};
    std::vector<AuditPath> back_paths;
    std::vector<AuditPath> fwd_paths;
    if (back) back_paths = trace(graph, entry, rule.back, el);
    if (fwd) fwd_paths = trace(graph, entry, rule.fwd, el);
    local.paths_explored += back_paths.size() + fwd_paths.size();
    auto origins = adjudicate(rule, ctx, std::move(back_paths), Scope::BackOrigin, Scope::BackPath);
    if (origins.empty()) continue;
    auto termini = adjudicate(rule, ctx, std::move(fwd_paths), Scope::FwdTerminus, Scope::FwdPath);
    for (const auto& o : origins) {
      for (const auto& t : termini) out.push_back(make_finding(rule, ctx, entry, o, t));
    }
  }
  std::sort(out.begin(), out.end(), finding_less);
  local.findings = out.size();
  if (stats) *stats = local;
  return out;
}

AuditReport audit(const AgentBomGraph& graph, const std::vector<AuditRule>& rules, unsigned workers) {
  std::vector<std::vector<Finding>> per_rule(rules.size());
  std::vector<RuleStats> stats(rules.size());
  if (workers > 1 && rules.size() > 1) {
    std::vector<std::future<void>> jobs;
    for (unsigned w = 0; w < workers; ++w) {
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t i = w; i < rules.size(); i += workers) per_rule[i] = evaluate_rule(graph, rules[i], &stats[i]);
      }));
    }
    for (auto& j : jobs) j.get();
  } else {
    for (std::size_t i = 0; i < rules.size(); ++i) per_rule[i] = evaluate_rule(graph, rules[i], &stats[i]);
  }
  AuditReport report;
  report.graph_digest = graph_digest(graph);
  for (auto& fs : per_rule) {
    for (auto& f : fs) report.findings.push_back(std::move(f));
  }
  std::sort(report.findings.begin(), report.findings.end(), finding_less);
  report.findings.erase(std::unique(report.findings.begin(), report.findings.end(),
                                    [](const Finding& a, const Finding& b) {
                                      return !finding_less(a, b) && !finding_less(b, a);
                                    }),
                        report.findings.end());
  std::stable_sort(stats.begin(), stats.end(),
                   [](const RuleStats& a, const RuleStats& b) { return a.risk_id < b.risk_id; });
  report.stats = std::move(stats);
  return report;
}

bool verify_finding(const AgentBomGraph& graph, const AuditRule& rule, const Finding& finding) {
  Element entry = resolve_element(graph, finding.entry);
  if (!entry.valid() || finding.risk_id != rule.risk_id) return false;
  EvalContext ctx{graph, entry};
  const auto back_elements = path_elements(finding.back_paths);
  const auto fwd_elements = path_elements(finding.fwd_paths);
  std::set<std::string> on_paths(back_elements.begin(), back_elements.end());
  on_paths.insert(fwd_elements.begin(), fwd_elements.end());
  on_paths.insert(finding.entry);
  for (const auto& ev : finding.evidence) {
    if (!on_paths.count(ev.element) || ev.clause >= rule.conditions.size()) return false;
  }
  for (const auto& p : finding.back_paths) {
    if (!finding.back_origin || p.origin() != *finding.back_origin) {
      if (has_scope(rule, Scope::BackOrigin)) return false;
    }
  }
  for (const auto& p : finding.fwd_paths) {
    if (!finding.fwd_terminus || p.terminus() != *finding.fwd_terminus) {
      if (has_scope(rule, Scope::FwdTerminus)) return false;
    }
  }
  for (std::size_t i = 0; i < rule.conditions.size(); ++i) {
    const Clause& c = rule.conditions[i];
    std::vector<std::string> witnesses;
    for (const auto& ev : finding.evidence) {
      if (ev.clause == i) witnesses.push_back(ev.element);
    }
    if (witnesses.empty()) return false;
    std::vector<std::string> scope;
    switch (c.scope) {
      case Scope::Entry: scope = {finding.entry}; break;
      case Scope::BackOrigin:
        if (!finding.back_origin) return false;
        scope = {*finding.back_origin};
        break;
      case Scope::BackPath: scope = back_elements; break;
      case Scope::FwdTerminus:
        if (!finding.fwd_terminus) return false;
        scope = {*finding.fwd_terminus};
        break;
      case Scope::FwdPath: scope = fwd_elements; break;
    }
    for (const auto& w : witnesses) {
      if (std::find(scope.begin(), scope.end(), w) == scope.end()) return false;
      if (!evaluate(c.predicate, resolve_element(graph, w), ctx)) return false;
    }
    if (c.quantifier == Quantifier::Forall) {
      std::set<std::string> covered(witnesses.begin(), witnesses.end());
      for (const auto& s : scope) {
        if (!covered.count(s)) return false;
      }
    }
  }
  return true;
}

// JSON -----------------------------------------------------------------------

Json path_spec_to_json(const PathSpec& spec) {
  return {{"direction", to_string(spec.direction)},
          {"edges", spec.allowed_edge_kinds},
          {"node_kinds", spec.allowed_node_kinds},
          {"terminal", predicate_to_json(spec.terminal_predicate)},
          {"max_depth", spec.max_depth},
          {"cross_agent", spec.cross_agent},
          {"include_start", spec.include_start},
          {"temporal", spec.temporal}};
}

PathSpec path_spec_from_json(const Json& j) {
  if (!j.is_object()) rule_error("path spec must be an object");
  PathSpec spec;
  try {
    auto dir = j.value("direction", std::string("backward"));
    if (dir != "backward" && dir != "forward") rule_error("direction must be backward|forward");
    spec.direction = dir == "forward" ? Direction::Forward : Direction::Backward;
    spec.allowed_edge_kinds = j.value("edges", StringList{});
    spec.allowed_node_kinds = j.value("node_kinds", StringList{});
    if (j.contains("terminal")) spec.terminal_predicate = predicate_from_json(j.at("terminal"));
    spec.max_depth = j.value("max_depth", 32);
    spec.cross_agent = j.value("cross_agent", false);
    spec.include_start = j.value("include_start", false);
    spec.temporal = j.value("temporal", false);
  } catch (const nlohmann::json::exception& e) {
    rule_error(std::string("bad path spec: ") + e.what());
  }
  return spec;
}

Json rule_to_json(const AuditRule& rule) {
  Json conditions = Json::array();
  for (const auto& c : rule.conditions) {
    conditions.push_back({{"scope", to_string(c.scope)},
                          {"quantifier", to_string(c.quantifier)},
                          {"predicate", predicate_to_json(c.predicate)}});
  }
  return {{"risk_id", rule.risk_id},
          {"name", rule.name},
          {"entry",
           {{"element_class", rule.entry.element_class == ElementClass::Node ? "node" : "edge"},
            {"kinds", rule.entry.kinds},
            {"predicate", predicate_to_json(rule.entry.predicate)}}},
          {"back", path_spec_to_json(rule.back)},
          {"fwd", path_spec_to_json(rule.fwd)},
          {"conditions", conditions}};
}

AuditRule rule_from_json(const Json& j) {
  if (!j.is_object()) rule_error("rule must be an object");
  AuditRule rule;
  try {
    rule.risk_id = j.at("risk_id").get<std::string>();
    rule.name = j.value("name", std::string());
    const Json& entry = j.at("entry");
    auto cls = entry.value("element_class", std::string("node"));
    if (cls != "node" && cls != "edge") rule_error("element_class must be node|edge");
    rule.entry.element_class = cls == "node" ? ElementClass::Node : ElementClass::Edge;
    rule.entry.kinds = entry.at("kinds").get<StringList>();
    if (entry.contains("predicate")) rule.entry.predicate = predicate_from_json(entry.at("predicate"));
    PathSpec fwd_default;
    fwd_default.direction = Direction::Forward;
    if (j.contains("back")) rule.back = path_spec_from_json(j.at("back"));
    rule.fwd = j.contains("fwd") ? path_spec_from_json(j.at("fwd")) : fwd_default;
    for (const auto& c : j.at("conditions")) {
      Clause clause;
      auto scope = c.at("scope").get<std::string>();
      auto it = std::find_if(kScopes.begin(), kScopes.end(), [&](const auto& s) { return s.second == scope; });
      if (it == kScopes.end()) rule_error("unknown clause scope '" + scope + "'");
      clause.scope = it->first;
      auto q = c.value("quantifier", std::string("exists"));
      if (q != "exists" && q != "forall") rule_error("quantifier must be exists|forall");
      clause.quantifier = q == "forall" ? Quantifier::Forall : Quantifier::Exists;
      clause.predicate = predicate_from_json(c.at("predicate"));
      rule.conditions.push_back(std::move(clause));
    }
  } catch (const nlohmann::json::exception& e) {
    rule_error(std::string("bad rule: ") + e.what());
  }
  check_rule(rule);
  return rule;
}

Json rules_to_json(const std::vector<AuditRule>& rules) {
  Json arr = Json::array();
  for (const auto& r : rules) arr.push_back(rule_to_json(r));
  return {{"rules", arr}};
}

std::vector<AuditRule> parse_rules(std::string_view text) {
  Json doc = Json::parse(text, nullptr, false);
  if (doc.is_discarded()) rule_error("rule pack is not valid JSON");
  const Json* arr = &doc;
  if (doc.is_object()) {
    if (!doc.contains("rules")) rule_error("rule pack needs a 'rules' array");
    arr = &doc.at("rules");
  }
  if (!arr->is_array()) rule_error("rule pack needs a 'rules' array");
  std::vector<AuditRule> out;
  std::set<std::string> ids;
  for (const auto& r : *arr) {
    out.push_back(rule_from_json(r));
    if (!ids.insert(out.back().risk_id).second) rule_error("risk_id '" + out.back().risk_id + "' repeated");
  }
  return out;
}

Json finding_to_json(const Finding& f) {
  Json back = Json::array();
  for (const auto& p : f.back_paths) back.push_back(path_to_json(p));
  Json fwd = Json::array();
  for (const auto& p : f.fwd_paths) fwd.push_back(path_to_json(p));
  Json evidence = Json::array();
  for (const auto& e : f.evidence) {
    evidence.push_back({{"element", e.element}, {"clause", e.clause}, {"key", e.key}, {"value", e.value}});
  }
  return {{"risk_id", f.risk_id},
          {"risk_name", f.risk_name},
          {"entry", f.entry},
          {"back_origin", optional_json(f.back_origin)},
          {"fwd_terminus", optional_json(f.fwd_terminus)},
          {"back_paths", back},
          {"fwd_paths", fwd},
          {"evidence", evidence},
          {"trace_id", optional_json(f.trace_id)},
          {"agents_involved", f.agents_involved},
          {"phase_label", f.phase_label}};
}

Json report_to_json(const AuditReport& report) {
  Json findings = Json::array();
  std::set<std::string> risks;
  for (const auto& f : report.findings) {
    findings.push_back(finding_to_json(f));
    risks.insert(f.risk_id);
  }
  Json rules = Json::array();
  for (const auto& s : report.stats) {
    rules.push_back({{"risk_id", s.risk_id},
                     {"entries_examined", s.entries_examined},
                     {"paths_explored", s.paths_explored},
                     {"findings", s.findings}});
  }
  return {{"graph_digest", report.graph_digest},
          {"findings", findings},
          {"stats", {{"finding_count", report.findings.size()}, {"risk_ids", risks}, {"rules", rules}}}};
}

std::string serialize_report(const AuditReport& report) { return report_to_json(report).dump(2) + "\n"; }

}  // namespace agentbom
