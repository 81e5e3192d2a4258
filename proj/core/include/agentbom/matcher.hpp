#pragma once

// Deterministic pattern flags over attribute text. A flag is set when any
// pattern for it matches any string value under one of its keys.

#include <regex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "agentbom/graph.hpp"

namespace agentbom {

struct DangerPattern {
  std::string flag_name;
  std::string pattern;  // ECMAScript regex, matched case-insensitively
  StringList applies_to;

  bool operator==(const DangerPattern&) const = default;
};

class DangerMatcher {
 public:
  DangerMatcher() = default;
  /// Throws MatcherParseError on an empty flag name or a bad regex.
  explicit DangerMatcher(std::vector<DangerPattern> patterns);

  static DangerMatcher default_pack();
  /// {"patterns": [{"flag_name", "pattern", "applies_to": [...]}, ...]}
  static DangerMatcher from_json(const nlohmann::json& doc);
  static DangerMatcher from_text(std::string_view text);
  nlohmann::json to_json() const;

  /// Sorted, de-duplicated flag names raised by `attrs`.
  StringList scan(const AttributeMap& attrs) const;
  /// Merges scan(attrs) into attrs["danger_flags"]; an empty result leaves
  /// attrs untouched.
  void annotate(AttributeMap& attrs) const;

  const std::vector<DangerPattern>& patterns() const { return patterns_; }

 private:
  std::vector<DangerPattern> patterns_;
  std::vector<std::regex> compiled_;
};

}  // namespace agentbom
