#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "agentbom/dot.hpp"
#include "agentbom/ingestion.hpp"
#include "agentbom/matcher.hpp"
#include "agentbom/rules.hpp"
#include "agentbom/scenarios.hpp"
#include "agentbom/serialize.hpp"

namespace agentbom::cli {

namespace {

namespace fs = std::filesystem;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw InputError("cannot write " + path.string());
}

DangerMatcher load_matchers(const std::string& flag) {
  std::string path = flag;
  if (path.empty()) {
    if (const char* env = std::getenv("AGENTBOM_MATCHERS"); env != nullptr) path = env;
  }
  if (path.empty()) return DangerMatcher::default_pack();
  return DangerMatcher::from_text(read_file(path));
}

std::vector<AuditRule> load_rules(const std::string& path) {
  return path.empty() ? builtin_rules() : parse_rules(read_file(path));
}

struct BuildArgs {
  std::string manifest, trace, matchers, out;
};
struct AuditArgs {
  std::string graph, rules, out, format = "json";
  bool fail_on_findings = false;
  unsigned jobs = 1;
};
struct ScenarioArgs {
  std::string id, out;
  std::uint64_t seed = 0;
};
struct ExportArgs {
  std::string graph, rules, out, format = "dot";
  std::optional<std::size_t> finding;
};
struct ValidateArgs {
  std::string graph;
};

int do_build(const BuildArgs& a) {
  auto manifest = parse_manifest(read_file(a.manifest));
  auto events = parse_trace_jsonl(read_file(a.trace));
  auto graph = assemble(manifest, events, load_matchers(a.matchers));
  write_file(a.out, serialize_graph(graph));
  std::cout << "graph " << a.out << ": " << graph.nodes().size() << " nodes, " << graph.edges().size()
            << " edges, digest " << graph_digest(graph) << "\n";
  return kOk;
}

int do_audit(const AuditArgs& a) {
  auto graph = parse_graph(read_file(a.graph));
  auto report = audit(graph, load_rules(a.rules), a.jobs);
  write_file(a.out, serialize_report(report));
  std::cout << report.findings.size() << " finding(s) in " << a.graph << "\n";
  for (const auto& f : report.findings) {
    std::cout << "  " << f.risk_id << " " << f.risk_name << ": " << f.back_origin.value_or("-") << " -> "
              << f.entry << " -> " << f.fwd_terminus.value_or("-") << "\n";
  }
  return a.fail_on_findings && !report.findings.empty() ? kFindings : kOk;
}

int do_scenario(const ScenarioArgs& a) {
  auto fixture = generate(parse_scenario_id(a.id), a.seed);
  auto dir = write_fixture(fixture, a.out);
  std::cout << "wrote " << dir.string() << " (" << fixture.events.size() << " events)\n";
  return kOk;
}

int do_export(const ExportArgs& a) {
  auto graph = parse_graph(read_file(a.graph));
  std::optional<Finding> chosen;
  if (a.finding) {
    auto report = audit(graph, load_rules(a.rules));
    if (*a.finding >= report.findings.size()) {
      throw InputError("finding index " + std::to_string(*a.finding) + " out of range (" +
                       std::to_string(report.findings.size()) + " findings)");
    }
    chosen = report.findings[*a.finding];
  }
  write_file(a.out, to_dot(graph, chosen ? &*chosen : nullptr));
  std::cout << "wrote " << a.out << "\n";
  return kOk;
}

int do_validate(const ValidateArgs& a) {
  auto graph = parse_graph(read_file(a.graph));
  auto violations = graph.validate();
  for (const auto& v : violations) {
    std::cerr << to_string(v.code) << " " << v.element << ": " << v.message << "\n";
  }
  if (!violations.empty()) return kInputError;
  std::cout << "ok: " << graph.nodes().size() << " nodes, " << graph.edges().size() << " edges\n";
  return kOk;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Build, audit and export agent bill-of-materials graphs"};
  app.require_subcommand(1);

  BuildArgs build;
  auto* b = app.add_subcommand("build", "Assemble a graph from a manifest and a trace");
  b->add_option("--manifest", build.manifest, "Capability manifest (JSON)")->required();
  b->add_option("--trace", build.trace, "Trace events (JSON lines)")->required();
  b->add_option("--matchers", build.matchers, "Danger matcher pack (JSON); defaults to $AGENTBOM_MATCHERS");
  b->add_option("--out", build.out, "Graph output path")->required();

  AuditArgs aud;
  auto* a = app.add_subcommand("audit", "Run the rule pack over a graph");
  a->add_option("--graph", aud.graph)->required();
  a->add_option("--rules", aud.rules, "Rule pack (JSON); defaults to the built-in rules");
  a->add_option("--out", aud.out, "Report output path")->required();
  a->add_option("--format", aud.format)->check(CLI::IsMember({"json"}));
  a->add_option("--jobs", aud.jobs, "Worker threads")->check(CLI::Range(1u, 64u));
  a->add_flag("--fail-on-findings", aud.fail_on_findings, "Exit 1 when any finding is reported");

  ScenarioArgs scn;
  auto* s = app.add_subcommand("scenario", "Write a synthetic scenario fixture");
  s->add_option("--id", scn.id)->required();
  s->add_option("--seed", scn.seed)->required();
  s->add_option("--out", scn.out, "Output root directory")->required();

  ExportArgs exp;
  auto* e = app.add_subcommand("export", "Render a graph as Graphviz DOT");
  e->add_option("--graph", exp.graph)->required();
  e->add_option("--finding", exp.finding, "Index into the audit findings to highlight");
  e->add_option("--rules", exp.rules, "Rule pack used to recompute findings");
  e->add_option("--format", exp.format)->check(CLI::IsMember({"dot"}));
  e->add_option("--out", exp.out)->required();

  ValidateArgs val;
  auto* v = app.add_subcommand("validate", "Re-check a serialized graph against the schema");
  v->add_option("--graph", val.graph)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForAllHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    std::cerr << "agentbom: " << err.what() << "\n";
    return kInputError;
  }

  try {
    if (b->parsed()) return do_build(build);
    if (a->parsed()) return do_audit(aud);
    if (s->parsed()) return do_scenario(scn);
    if (e->parsed()) return do_export(exp);
    return do_validate(val);
  } catch (const Error& err) {
    std::cerr << "agentbom: " << to_string(err.code()) << ": " << err.what() << "\n";
  } catch (const InputError& err) {
    std::cerr << "agentbom: " << err.what() << "\n";
  } catch (const std::exception& err) {
    std::cerr << "agentbom: " << err.what() << "\n";
  }
  return kInputError;
}

}  // namespace agentbom::cli
