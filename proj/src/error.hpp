#pragma once

#include <stdexcept>
#include <string>

namespace bcseg {

// Error taxonomy shared by the C++ core, the C API status codes, and the
// CLI exit statuses (io/format/invalid_argument -> 2, degenerate -> 3,
// domain/numeric -> 4).
enum class ErrorCode {
  io = 1,
  format = 2,
  invalid_argument = 3,
  domain = 4,      // value outside a transform's admissible domain
  degenerate = 5,  // constant data, zero variance, undefined kappa
  numeric = 6,     // overflow, non-convergence, maximum on bracket boundary
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::io: return "io";
    case ErrorCode::format: return "format";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::domain: return "domain";
    case ErrorCode::degenerate: return "degenerate";
    case ErrorCode::numeric: return "numeric";
  }
  return "unknown";
}

}  // namespace bcseg
