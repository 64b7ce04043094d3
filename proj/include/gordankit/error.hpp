#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gordankit {

enum class ErrorCode {
  dimension_mismatch,
  non_finite,
  asymmetric,
  invalid_weight,
  invalid_domain,
  unsupported_domain,
  numeric_failure,
  precondition,
  internal_consistency,
  budget_exceeded,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::dimension_mismatch: return "E_DIMENSION";
    case ErrorCode::non_finite: return "E_NONFINITE";
    case ErrorCode::asymmetric: return "E_ASYMMETRIC";
    case ErrorCode::invalid_weight: return "E_WEIGHT";
    case ErrorCode::invalid_domain: return "E_DOMAIN";
    case ErrorCode::unsupported_domain: return "E_UNSUPPORTED_DOMAIN";
    case ErrorCode::numeric_failure: return "E_NUMERIC";
    case ErrorCode::precondition: return "E_PRECONDITION";
    case ErrorCode::internal_consistency: return "E_INTERNAL";
    case ErrorCode::budget_exceeded: return "E_BUDGET";
  }
  return "E_UNKNOWN";
}

/// Every failure raised by the library carries a stable machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require_dims(std::size_t expected, std::size_t actual, const char* what) {
  if (expected != actual) {
    throw Error(ErrorCode::dimension_mismatch,
                std::string(what) + ": expected dimension " + std::to_string(expected) +
                    ", got " + std::to_string(actual));
  }
}

}  // namespace gordankit
