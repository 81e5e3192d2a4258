#pragma once

// Synthetic composite-attack fixtures and a benign baseline. The seed only
// moves timestamps, trace ids and message ids; graph structure and node ids
// are the same for every seed.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "agentbom/ingestion.hpp"
#include "agentbom/rules.hpp"

namespace agentbom {

enum class ScenarioId {
  MemoryPoisoningToolMisuse,
  SupplyChainCodeExec,
  EcosystemHijacking,
  PrivilegeTrustAbuse,
  BenignBaseline,
};

inline constexpr std::array kAllScenarios = {
    ScenarioId::MemoryPoisoningToolMisuse, ScenarioId::SupplyChainCodeExec, ScenarioId::EcosystemHijacking,
    ScenarioId::PrivilegeTrustAbuse, ScenarioId::BenignBaseline,
};

std::string_view to_string(ScenarioId id) noexcept;
/// Throws UnknownScenario.
ScenarioId parse_scenario_id(std::string_view name);

/// What one phase of a scenario should produce: the risk, and the kinds of
/// the backward origin and forward terminus ("" when the rule has none).
struct ExpectedPhase {
  std::string risk_id;
  std::string phase_label;
  std::string origin_kind;
  std::string impact_kind;

  bool operator==(const ExpectedPhase&) const = default;
};

struct ScenarioFixture {
  ScenarioId id = ScenarioId::BenignBaseline;
  std::uint64_t seed = 0;
  CapabilityManifest manifest;
  std::vector<TraceEvent> events;
  std::vector<ExpectedPhase> expected;  // sorted by risk_id
};

ScenarioFixture generate(ScenarioId id, std::uint64_t seed);

/// {scenario, seed, expected_risks, phases}
nlohmann::json expected_report_json(const ScenarioFixture& fixture);

/// Writes <root>/<scenario>/{manifest.json, trace.jsonl, expected_report.json}
/// and returns the scenario directory.
std::filesystem::path write_fixture(const ScenarioFixture& fixture, const std::filesystem::path& root);

/// Copies each expected phase label onto the findings of the same risk.
void label_findings(std::vector<Finding>& findings, const std::vector<ExpectedPhase>& expected);

/// The fixture with the source of `node_id` removed: the event for a runtime
/// node, the declaration for a static node (references to it are scrubbed so
/// the rest still assembles), or an agent with all of its events.
ScenarioFixture ablate(const ScenarioFixture& fixture, std::string_view node_id);

}  // namespace agentbom
