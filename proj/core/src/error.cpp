#include "sphsync/error.hpp"

namespace sphsync {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kNotFinite: return "non-finite value";
    case ErrorCode::kPreconditionerNotPositive: return "preconditioner not positive";
    case ErrorCode::kRetractionSingularity: return "retraction singularity";
    case ErrorCode::kEigensolverFailure: return "eigensolver failure";
    case ErrorCode::kGeneratorBudgetExhausted: return "generator attempt budget exhausted";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kIo: return "i/o error";
  }
  return "unknown error";
}

void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(to_string(code)) + ": " + what);
}

}  // namespace sphsync
