#include "agentbom/matcher.hpp"

#include <algorithm>
#include <set>

namespace agentbom {

namespace {

const StringList kTextKeys = {"action_intent", "content", "implementation_summary", "parameters",
                              "side_effects"};

}  // namespace

DangerMatcher::DangerMatcher(std::vector<DangerPattern> patterns) : patterns_(std::move(patterns)) {
  for (const auto& p : patterns_) {
    if (p.flag_name.empty()) throw Error(ErrorCode::MatcherParseError, "pattern without flag_name");
    try {
      compiled_.emplace_back(p.pattern, std::regex::ECMAScript | std::regex::icase);
    } catch (const std::regex_error& e) {
      throw Error(ErrorCode::MatcherParseError,
                  "flag '" + p.flag_name + "' has an invalid pattern: " + e.what());
    }
  }
}

DangerMatcher DangerMatcher::default_pack() {
  return DangerMatcher({
      {"destructive_command",
       R"(\brm\s+(-[a-z]*r[a-z]*f[a-z]*|-[a-z]*f[a-z]*r[a-z]*|-r\s+-f|-f\s+-r)\b|\bmkfs(\.\w+)?\b|\bdd\s+if=)",
       kTextKeys},
      {"exfiltration_endpoint", R"(\bhttps?://[^\s"']+)", {"implementation_summary", "parameters", "target"}},
      {"confirmation_bypass",
       R"(without\s+(the\s+)?(user'?s?\s+)?(confirmation|approval|consent)|skip(ping)?\s+(the\s+)?(confirmation|approval)|no\s+confirmation\s+(is\s+)?(needed|required))",
       kTextKeys},
      {"privilege_claim",
       R"(\bi\s+am\s+(the\s+|an\s+)?(admin|administrator|root|owner)\b|authorized\s+by\s+(the\s+)?(admin|administrator|owner|security\s+team)|elevated\s+privileges?|\bsudo\b)",
       kTextKeys},
      {"role_override",
       R"(your\s+new\s+role|\byou\s+are\s+now\b|ignore\s+(all\s+)?(previous|prior)\s+(instructions|rules|role))",
       kTextKeys},
  });
}

DangerMatcher DangerMatcher::from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("patterns") || !doc.at("patterns").is_array()) {
    throw Error(ErrorCode::MatcherParseError, "matcher pack needs a 'patterns' array");
  }
  std::vector<DangerPattern> out;
  for (const auto& j : doc.at("patterns")) {
    try {
      DangerPattern p;
      p.flag_name = j.at("flag_name").get<std::string>();
      p.pattern = j.at("pattern").get<std::string>();
      p.applies_to = j.value("applies_to", kTextKeys);
      out.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::MatcherParseError, std::string("bad pattern entry: ") + e.what());
    }
  }
  return DangerMatcher(std::move(out));
}

DangerMatcher DangerMatcher::from_text(std::string_view text) {
  auto doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorCode::MatcherParseError, "matcher pack is not valid JSON");
  return from_json(doc);
}

nlohmann::json DangerMatcher::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : patterns_) {
    arr.push_back({{"flag_name", p.flag_name}, {"pattern", p.pattern}, {"applies_to", p.applies_to}});
  }
  return {{"patterns", arr}};
}

StringList DangerMatcher::scan(const AttributeMap& attrs) const {
  std::set<std::string> flags;
  for (std::size_t i = 0; i < patterns_.size(); ++i) {
    const auto& p = patterns_[i];
    if (flags.count(p.flag_name)) continue;
    for (const auto& key : p.applies_to) {
      auto it = attrs.find(key);
      if (it == attrs.end()) continue;
      auto values = value_strings(it->second);
      if (std::any_of(values.begin(), values.end(),
                      [&](const std::string& v) { return std::regex_search(v, compiled_[i]); })) {
        flags.insert(p.flag_name);
        break;
      }
    }
  }
  return {flags.begin(), flags.end()};
}

void DangerMatcher::annotate(AttributeMap& attrs) const {
  auto found = scan(attrs);
  if (found.empty()) return;
  std::set<std::string> merged(found.begin(), found.end());
  for (auto& f : list_attribute(attrs, "danger_flags")) merged.insert(f);
  attrs["danger_flags"] = StringList(merged.begin(), merged.end());
}

}  // namespace agentbom
