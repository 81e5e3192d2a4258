#pragma once

// Audit rules: an entry selector, a backward and a forward path spec, and a
// conjunction of quantified clauses over the entry, the path origins/termini
// and the path elements.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "agentbom/graph.hpp"
#include "agentbom/predicate.hpp"
#include "agentbom/traversal.hpp"

namespace agentbom {

enum class ElementClass { Node, Edge };

struct EntrySelector {
  ElementClass element_class = ElementClass::Node;
  /// Node kind/layer tokens, or edge kind/family tokens.
  StringList kinds;
  Predicate predicate;

  bool operator==(const EntrySelector&) const = default;
};

enum class Scope { Entry, BackOrigin, BackPath, FwdTerminus, FwdPath };
enum class Quantifier { Exists, Forall };

std::string_view to_string(Scope s) noexcept;
std::string_view to_string(Quantifier q) noexcept;

struct Clause {
  Scope scope = Scope::Entry;
  Predicate predicate;
  Quantifier quantifier = Quantifier::Exists;

  bool operator==(const Clause&) const = default;
};

struct AuditRule {
  std::string risk_id;
  std::string name;
  EntrySelector entry;
  PathSpec back;
  PathSpec fwd;
  std::vector<Clause> conditions;

  bool operator==(const AuditRule&) const = default;
};

/// Throws RuleParseError unless the rule has a risk_id, at least one entry
/// clause, at least one back or fwd clause, and valid path specs.
void check_rule(const AuditRule& rule);

struct Evidence {
  std::string element;
  std::size_t clause = 0;
  std::string key;
  std::string value;

  bool operator==(const Evidence&) const = default;
};

struct Finding {
  std::string risk_id;
  std::string risk_name;
  std::string entry;
  std::optional<std::string> back_origin;
  std::optional<std::string> fwd_terminus;
  std::vector<AuditPath> back_paths;
  std::vector<AuditPath> fwd_paths;
  std::vector<Evidence> evidence;
  std::optional<std::string> trace_id;
  StringList agents_involved;
  std::string phase_label;

  bool operator==(const Finding&) const = default;
};

/// Ordering and de-duplication key: (risk_id, entry, origin, terminus).
bool finding_less(const Finding& a, const Finding& b);

struct RuleStats {
  std::string risk_id;
  std::size_t entries_examined = 0;
  std::size_t paths_explored = 0;
  std::size_t findings = 0;

  bool operator==(const RuleStats&) const = default;
};

struct AuditReport {
  std::string graph_digest;
  std::vector<Finding> findings;
  std::vector<RuleStats> stats;

  bool operator==(const AuditReport&) const = default;
};

/// Elements of the selector's kinds that satisfy its predicate and every
/// entry clause, sorted by id.
std::vector<std::string> locate_entries(const AgentBomGraph& graph, const AuditRule& rule);

std::vector<Finding> evaluate_rule(const AgentBomGraph& graph, const AuditRule& rule,
                                   RuleStats* stats = nullptr);

/// Evaluates every rule (on `workers` threads when > 1) and merges the
/// results in a fixed order, so the report does not depend on scheduling.
AuditReport audit(const AgentBomGraph& graph, const std::vector<AuditRule>& rules, unsigned workers = 1);

/// Replays every clause of `rule` against the evidence recorded in
/// `finding`: each clause has evidence, exists-clauses have a satisfying
/// witness, forall-clauses hold on every element of their scope, and all
/// evidence lies on the entry or the finding's paths.
bool verify_finding(const AgentBomGraph& graph, const AuditRule& rule, const Finding& finding);

/// The ten ASI01..ASI10 rules.
std::vector<AuditRule> builtin_rules();

// JSON ---------------------------------------------------------------------

nlohmann::json path_spec_to_json(const PathSpec& spec);
PathSpec path_spec_from_json(const nlohmann::json& j);
nlohmann::json rule_to_json(const AuditRule& rule);
AuditRule rule_from_json(const nlohmann::json& j);
/// {"rules": [...]}
nlohmann::json rules_to_json(const std::vector<AuditRule>& rules);
std::vector<AuditRule> parse_rules(std::string_view text);

nlohmann::json finding_to_json(const Finding& f);
nlohmann::json report_to_json(const AuditReport& report);
/// Two-space indented JSON with a trailing newline.
std::string serialize_report(const AuditReport& report);

}  // namespace agentbom
