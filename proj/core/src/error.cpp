#include "agentbom/error.hpp"

namespace agentbom {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::UnknownKind: return "UnknownKind";
    case ErrorCode::AttributeSchemaViolation: return "AttributeSchemaViolation";
    case ErrorCode::MissingTraceId: return "MissingTraceId";
    case ErrorCode::UnknownAgent: return "UnknownAgent";
    case ErrorCode::UnresolvedReference: return "UnresolvedReference";
    case ErrorCode::DanglingEndpoint: return "DanglingEndpoint";
    case ErrorCode::EndpointKindViolation: return "EndpointKindViolation";
    case ErrorCode::UnknownStart: return "UnknownStart";
    case ErrorCode::UnknownElement: return "UnknownElement";
    case ErrorCode::ManifestParseError: return "ManifestParseError";
    case ErrorCode::EventParseError: return "EventParseError";
    case ErrorCode::UnresolvedRef: return "UnresolvedRef";
    case ErrorCode::OutOfOrderTimestamp: return "OutOfOrderTimestamp";
    case ErrorCode::AssemblyValidationFailed: return "AssemblyValidationFailed";
    case ErrorCode::GraphParseError: return "GraphParseError";
    case ErrorCode::RuleParseError: return "RuleParseError";
    case ErrorCode::InvalidPathSpec: return "InvalidPathSpec";
    case ErrorCode::UnknownScenario: return "UnknownScenario";
    case ErrorCode::MatcherParseError: return "MatcherParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace agentbom
