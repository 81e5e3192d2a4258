#include <benchmark/benchmark.h>

#include "agentbom/scenarios.hpp"
#include "agentbom/serialize.hpp"

using namespace agentbom;

namespace {

void BM_Assemble(benchmark::State& state) {
  auto fx = generate(static_cast<ScenarioId>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(assemble(fx.manifest, fx.events));
  state.SetLabel(std::string(to_string(fx.id)));
}
BENCHMARK(BM_Assemble)->DenseRange(0, 4);

void BM_Audit(benchmark::State& state) {
  auto fx = generate(static_cast<ScenarioId>(state.range(0)), 7);
  auto g = assemble(fx.manifest, fx.events);
  auto rules = builtin_rules();
  for (auto _ : state) benchmark::DoNotOptimize(audit(g, rules, static_cast<unsigned>(state.range(1))));
  state.SetLabel(std::string(to_string(fx.id)));
}
BENCHMARK(BM_Audit)->ArgsProduct({{0, 1, 2, 3, 4}, {1, 4}});

// A long single-agent chain with influences shortcuts every third step, to
// see how backward tracing scales with path count.
AgentBomGraph chain(int length) {
  AgentBomGraph g;
  g.add_agent({"a", "", ""});
  for (int i = 0; i < length; ++i) {
    Node n;
    n.id = "n" + std::to_string(i);
    n.kind = NodeKind::ReasoningNode;
    n.agent_id = "a";
    n.trace_id = "t";
    n.timestamp = "2026-01-01T00:00:00Z";
    g.add_node(std::move(n));
    if (i > 0) {
      g.add_edge({"f" + std::to_string(i), EdgeKind::FlowsTo, "n" + std::to_string(i - 1), "n" + std::to_string(i),
                  {}, std::nullopt, std::nullopt});
    }
    if (i > 2 && i % 3 == 0) {
      g.add_edge({"s" + std::to_string(i), EdgeKind::Influences, "n" + std::to_string(i - 3), "n" + std::to_string(i),
                  {}, std::nullopt, std::nullopt});
    }
  }
  return g;
}

void BM_TraceChain(benchmark::State& state) {
  const int length = static_cast<int>(state.range(0));
  auto g = chain(length);
  PathSpec spec;
  spec.direction = Direction::Backward;
  spec.allowed_edge_kinds = {"evolution"};
  spec.terminal_predicate = pred::eq("id", "n0");
  const std::string start = "n" + std::to_string(length - 1);
  std::size_t found = 0;
  for (auto _ : state) found = trace(g, start, spec).size();
  state.counters["paths"] = static_cast<double>(found);
}
BENCHMARK(BM_TraceChain)->Arg(8)->Arg(16)->Arg(24)->Arg(30);

void BM_SerializeGraph(benchmark::State& state) {
  auto fx = generate(ScenarioId::PrivilegeTrustAbuse, 7);
  auto g = assemble(fx.manifest, fx.events);
  for (auto _ : state) benchmark::DoNotOptimize(serialize_graph(g));
}
BENCHMARK(BM_SerializeGraph);

}  // namespace
BENCHMARK_MAIN();
