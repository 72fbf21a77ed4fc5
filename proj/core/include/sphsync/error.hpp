#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sphsync {

enum class ErrorCode {
  kDimensionMismatch,
  kInvalidArgument,
  kNotFinite,
  kPreconditionerNotPositive,
  kRetractionSingularity,
  kEigensolverFailure,
  kGeneratorBudgetExhausted,
  kParse,
  kIo,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` tells callers which
/// contract was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace sphsync
