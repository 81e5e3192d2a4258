// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "agentbom/dot.hpp"
#include "agentbom/scenarios.hpp"
#include "agentbom/serialize.hpp"
#include "cli.hpp"
#include "oracles.hpp"

using namespace agentbom;
namespace fs = std::filesystem;

namespace {

const std::vector<ScenarioId> kAttacks = {ScenarioId::MemoryPoisoningToolMisuse, ScenarioId::SupplyChainCodeExec,
                                          ScenarioId::EcosystemHijacking, ScenarioId::PrivilegeTrustAbuse};

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

const AuditRule& rule_for(const std::vector<AuditRule>& rules, const std::string& risk) {
  for (const auto& r : rules) {
    if (r.risk_id == risk) return r;
  }
  throw std::runtime_error("no rule " + risk);
}

std::string kind_of(const AgentBomGraph& g, const std::optional<std::string>& id) {
  if (!id) return "";
  const Node* n = g.find_node(*id);
  return n ? std::string(to_string(n->kind)) : "";
}

Outcome scenario_replay() {
  Outcome out;
  const auto rules = builtin_rules();
  double slowest = 0;
  for (auto id : kAttacks) {
    for (std::uint64_t seed : {7ull, 1ull, 2026ull}) {
      const auto t0 = std::chrono::steady_clock::now();
      auto fx = generate(id, seed);
      auto g = assemble(fx.manifest, fx.events);
      auto report = audit(g, rules);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      slowest = std::max(slowest, secs);
      if (secs >= 1.0) out.fail(std::string(to_string(id)) + " took " + std::to_string(secs) + " s");

      std::set<std::string> got;
      std::set<std::string> want;
      for (const auto& f : report.findings) got.insert(f.risk_id);
      for (const auto& p : fx.expected) want.insert(p.risk_id);
      if (got != want) out.fail(std::string(to_string(id)) + ": risk set differs");

      for (const auto& f : report.findings) {
        for (const auto& p : fx.expected) {
          if (p.risk_id != f.risk_id) continue;
          if (kind_of(g, f.back_origin) != p.origin_kind || kind_of(g, f.fwd_terminus) != p.impact_kind) {
            out.fail(std::string(to_string(id)) + " " + f.risk_id + ": origin/impact kinds " +
                     kind_of(g, f.back_origin) + "/" + kind_of(g, f.fwd_terminus));
          }
          for (const auto& path : f.back_paths) {
            if (path.reached() != f.back_origin) out.fail(f.risk_id + ": back path misses origin");
          }
          for (const auto& path : f.fwd_paths) {
            if (path.reached() != f.fwd_terminus) out.fail(f.risk_id + ": fwd path misses terminus");
          }
        }
        if (id == ScenarioId::MemoryPoisoningToolMisuse) {
          const auto& origin = g.node(*f.back_origin).attributes;
          if (text_attribute(origin, "trust_level") != "untrusted") out.fail("S1 origin is not untrusted");
          if (f.risk_id == "ASI02" &&
              !text_attribute(g.node(*f.fwd_terminus).attributes, "environment_state_change")) {
            out.fail("S1 impact lacks environment_state_change");
          }
        }
      }
    }
  }
  if (out.ok) out.detail = "4 scenarios x 3 seeds, slowest " + std::to_string(slowest * 1000).substr(0, 5) + " ms";
  return out;
}

Outcome negative_baseline() {
  Outcome out;
  const auto rules = builtin_rules();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto fx = generate(ScenarioId::BenignBaseline, seed);
    auto report = audit(assemble(fx.manifest, fx.events), rules);
    if (!report.findings.empty()) out.fail("seed " + std::to_string(seed) + ": " + report.findings[0].risk_id);
  }
  if (out.ok) out.detail = "0 findings over 20 seeds x 10 rules";
  return out;
}

Outcome traversal_oracle() {
  Outcome out;
  std::mt19937_64 rng(20260501);
  std::size_t paths = 0;
  constexpr int kCases = 1000;
  for (int i = 0; i < kCases; ++i) {
    auto g = testing::random_graph(rng, 50);
    auto spec = testing::random_spec(rng, g);
    auto start = testing::random_start(rng, g);
    auto want = testing::enumerate_paths(g, start, spec);
    std::vector<std::vector<std::string>> got;
    for (const auto& p : trace(g, start, spec.to_path_spec())) got.push_back(p.elements);
    paths += want.size();
    if (got != want) out.fail("case " + std::to_string(i) + " differs");
  }
  if (out.ok) out.detail = std::to_string(kCases) + " graphs, " + std::to_string(paths) + " paths, 0 mismatches";
  return out;
}

Outcome schema_fuzz() {
  Outcome out;
  std::mt19937_64 rng(424242);
  std::uniform_int_distribution<std::size_t> nk(0, kAllNodeKinds.size() - 1);
  std::uniform_int_distribution<std::size_t> ek(0, kAllEdgeKinds.size() - 1);
  constexpr int kTriples = 10000;
  int disagreements = 0;
  int accepted_total = 0;
  for (int i = 0; i < kTriples; ++i) {
    const std::string s(to_string(kAllNodeKinds[nk(rng)]));
    const std::string t(to_string(kAllNodeKinds[nk(rng)]));
    const std::string e(to_string(kAllEdgeKinds[ek(rng)]));
    AgentBomGraph g;
    g.add_agent({"a", "", ""});
    g.add_agent({"b", "", ""});
    g.add_node(testing::make_node("s", s, "a"));
    g.add_node(testing::make_node("t", t, "b"));
    bool accepted = true;
    try {
      g.add_edge({"x", *parse_edge_kind(e), "s", "t", {}, std::nullopt, std::nullopt});
    } catch (const Error&) {
      accepted = false;
    }
    accepted_total += accepted;
    if (accepted != (testing::endpoint_table().count({e, s, t}) > 0)) ++disagreements;
  }
  if (disagreements) out.fail(std::to_string(disagreements) + " disagreements");
  else out.detail = std::to_string(kTriples) + " triples, " + std::to_string(accepted_total) + " accepted, 0 disagreements";
  return out;
}

Outcome self_verification() {
  Outcome out;
  const auto rules = builtin_rules();
  int checked = 0;
  for (auto id : kAllScenarios) {
    auto fx = generate(id, 7);
    auto g = assemble(fx.manifest, fx.events);
    for (const auto& f : audit(g, rules).findings) {
      const auto& r = rule_for(rules, f.risk_id);
      if (!verify_finding(g, r, f)) out.fail(f.risk_id + " on " + f.entry + " does not verify");
      // replay each exists-clause on its witnesses directly
      const Element entry = resolve_element(g, f.entry);
      for (std::size_t c = 0; c < r.conditions.size(); ++c) {
        bool witnessed = false;
        for (const auto& ev : f.evidence) {
          if (ev.clause != c) continue;
          witnessed = true;
          if (!evaluate(r.conditions[c].predicate, resolve_element(g, ev.element), EvalContext{g, entry})) {
            out.fail(f.risk_id + " clause " + std::to_string(c) + " false on " + ev.element);
          }
        }
        if (!witnessed) out.fail(f.risk_id + " clause " + std::to_string(c) + " has no evidence");
      }
      ++checked;
    }
  }
  if (out.ok) out.detail = std::to_string(checked) + " findings replayed";
  return out;
}

Outcome ablation() {
  Outcome out;
  const auto rules = builtin_rules();
  int ablations = 0;
  for (auto id : kAttacks) {
    auto fx = generate(id, 7);
    auto g = assemble(fx.manifest, fx.events);
    for (const auto& f : audit(g, rules).findings) {
      std::set<std::string> on_path;
      if (g.find_node(f.entry)) on_path.insert(f.entry);
      for (const auto* paths : {&f.back_paths, &f.fwd_paths}) {
        for (const auto& p : *paths) {
          for (const auto& el : p.elements) {
            if (g.find_node(el)) on_path.insert(el);
          }
        }
      }
      for (const auto& node : on_path) {
        auto cut = ablate(fx, node);
        auto report = audit(assemble(cut.manifest, cut.events), rules);
        for (const auto& g2 : report.findings) {
          if (!finding_less(f, g2) && !finding_less(g2, f)) {
            out.fail(f.risk_id + " at " + f.entry + " survives removing " + node);
          }
        }
        ++ablations;
      }
    }
  }
  if (out.ok) out.detail = std::to_string(ablations) + " single-node ablations, every finding removed";
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "agentbom");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::streambuf* saved = std::cout.rdbuf(nullptr);
  const int code = cli::run(static_cast<int>(argv.size()), argv.data());
  std::cout.rdbuf(saved);
  return code;
}

// scenario -> build -> audit -> export through the CLI; returns the bytes of
// graph, report and DOT.
std::vector<std::string> pipeline(const fs::path& dir, ScenarioId id) {
  const std::string name(to_string(id));
  const auto fx = dir / name;
  if (cli({"scenario", "--id", name, "--seed", "7", "--out", dir.string()}) != 0 ||
      cli({"build", "--manifest", (fx / "manifest.json").string(), "--trace", (fx / "trace.jsonl").string(), "--out",
           (dir / "graph.json").string()}) != 0 ||
      cli({"audit", "--graph", (dir / "graph.json").string(), "--out", (dir / "report.json").string()}) != 0) {
    throw std::runtime_error("pipeline failed for " + name);
  }
  std::vector<std::string> export_args = {"export", "--graph", (dir / "graph.json").string(), "--out",
                                          (dir / "graph.dot").string()};
  if (id != ScenarioId::BenignBaseline) {
    export_args.insert(export_args.end(), {"--finding", "0"});
  }
  if (cli(export_args) != 0) throw std::runtime_error("export failed for " + name);
  return {slurp(dir / "graph.json"), slurp(dir / "report.json"), slurp(dir / "graph.dot")};
}

Outcome determinism() {
  Outcome out;
  const auto root = fs::temp_directory_path() / "agentbom_acceptance";
  fs::remove_all(root);
  std::size_t bytes = 0;
  for (auto id : kAllScenarios) {
    const std::string name(to_string(id));
    auto a = pipeline(root / "run1" / name, id);
    auto b = pipeline(root / "run2" / name, id);
    for (std::size_t i = 0; i < a.size(); ++i) {
      bytes += a[i].size();
      if (a[i].empty() || a[i] != b[i]) out.fail(name + " output " + std::to_string(i) + " differs");
    }
  }
  fs::remove_all(root);
  if (out.ok) out.detail = "graph, report and DOT identical for 5 scenarios (" + std::to_string(bytes) + " bytes)";
  return out;
}

Outcome rule_pack() {
  Outcome out;
  const std::vector<std::pair<std::string, std::set<std::string>>> table = {
      {"ASI01", {"GoalNode"}},
      {"ASI02", {"ToolNode"}},
      {"ASI03", {"ReasoningNode"}},
      {"ASI04", {"ToolNode", "SkillNode", "PromptNode", "CodeNode", "LLMNode"}},
      {"ASI05", {"ToolNode"}},
      {"ASI06", {"ActionNode", "ContextNode"}},
      {"ASI07", {"AgentPropagationEdge"}},
      {"ASI08", {"AgentPropagationEdge"}},
      {"ASI09", {"ExternalNode", "ObservationNode"}},
      {"ASI10", {"AgentNode", "PromptNode", "CodeNode"}},
  };
  const auto rules = builtin_rules();
  if (rules.size() != table.size()) out.fail(std::to_string(rules.size()) + " rules");
  for (std::size_t i = 0; i < std::min(rules.size(), table.size()); ++i) {
    const auto& r = rules[i];
    const std::set<std::string> kinds(r.entry.kinds.begin(), r.entry.kinds.end());
    const bool edge_rule = table[i].second.count("AgentPropagationEdge") > 0;
    if (r.risk_id != table[i].first || kinds != table[i].second ||
        (r.entry.element_class == ElementClass::Edge) != edge_rule) {
      out.fail(table[i].first + " entry kinds differ");
    }
  }
  // ASI06 entries must be memory writes or contexts, never other actions
  auto fx = generate(ScenarioId::MemoryPoisoningToolMisuse, 7);
  auto g = assemble(fx.manifest, fx.events);
  for (const auto& id : locate_entries(g, rule_for(rules, "ASI06"))) {
    const Node& n = g.node(id);
    if (n.kind == NodeKind::ActionNode && text_attribute(n.attributes, "type") != "memory_write") {
      out.fail("ASI06 entry " + id + " is not a memory write");
    }
  }
  if (out.ok) out.detail = "10 rules, entry kinds match";
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"scenario replay", scenario_replay},     {"negative baseline", negative_baseline},
      {"traversal oracle", traversal_oracle},   {"schema fuzz", schema_fuzz},
      {"finding self-verification", self_verification}, {"ablation", ablation},
      {"determinism", determinism},             {"rule-pack completeness", rule_pack},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    failures += !o.ok;
    std::cout << (o.ok ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": " << o.detail << "\n";
  }
  return failures == 0 ? 0 : 1;
}
