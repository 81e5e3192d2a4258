#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace agentbom {

enum class ErrorCode {
  DuplicateId,
  UnknownKind,
  AttributeSchemaViolation,
  MissingTraceId,
  UnknownAgent,
  UnresolvedReference,
  DanglingEndpoint,
  EndpointKindViolation,
  UnknownStart,
  UnknownElement,
  ManifestParseError,
  EventParseError,
  UnresolvedRef,
  OutOfOrderTimestamp,
  AssemblyValidationFailed,
  GraphParseError,
  RuleParseError,
  InvalidPathSpec,
  UnknownScenario,
  MatcherParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above. The
/// message is a single line suitable for a CLI diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace agentbom
