#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ultragram {

enum class ErrorCode {
  MismatchedGroups,
  NotASubgroup,
  DivisionByZero,
  MismatchedAmbient,
  LeadingTermUnknown,
  ValuationMismatch,
  ZeroElementInFamily,
  PrecisionExhausted,
  UncertifiedSubspace,
  NotIndependent,
  NotNormalized,
  NotInSpan,
  NotFieldClosed,
  NotCofinal,
  ProbeInK,
  ParseError,
  UnknownName,
  UnsupportedCombination,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code. Every library failure is one of these.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ultragram
