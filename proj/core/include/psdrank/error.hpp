#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace psdrank {

enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  not_interior,
  numerical_failure,
  pataki_violation,
  missing_variable,
  insufficient_samples,
  all_skipped,
  parse_error,
  io_error,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::not_interior: return "not_interior";
    case ErrorCode::numerical_failure: return "numerical_failure";
    case ErrorCode::pataki_violation: return "pataki_violation";
    case ErrorCode::missing_variable: return "missing_variable";
    case ErrorCode::insufficient_samples: return "insufficient_samples";
    case ErrorCode::all_skipped: return "all_skipped";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::io_error: return "io_error";
  }
  return "unknown";
}

}  // namespace psdrank
