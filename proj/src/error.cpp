#include "ultragram/error.hpp"

namespace ultragram {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MismatchedGroups: return "MismatchedGroups";
    case ErrorCode::NotASubgroup: return "NotASubgroup";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::MismatchedAmbient: return "MismatchedAmbient";
    case ErrorCode::LeadingTermUnknown: return "LeadingTermUnknown";
    case ErrorCode::ValuationMismatch: return "ValuationMismatch";
    case ErrorCode::ZeroElementInFamily: return "ZeroElementInFamily";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::UncertifiedSubspace: return "UncertifiedSubspace";
    case ErrorCode::NotIndependent: return "NotIndependent";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NotInSpan: return "NotInSpan";
    case ErrorCode::NotFieldClosed: return "NotFieldClosed";
    case ErrorCode::NotCofinal: return "NotCofinal";
    case ErrorCode::ProbeInK: return "ProbeInK";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownName: return "UnknownName";
    case ErrorCode::UnsupportedCombination: return "UnsupportedCombination";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace ultragram
