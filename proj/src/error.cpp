#include "fide/error.hpp"

namespace fide {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::ValidationError: return "VALIDATION_ERROR";
    case ErrorCode::NonConvergedQuadrature: return "NON_CONVERGED_QUADRATURE";
    case ErrorCode::MaxIterations: return "MAX_ITERATIONS";
    case ErrorCode::SingularJacobian: return "SINGULAR_JACOBIAN";
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::TruncationLoss: return "TRUNCATION_LOSS";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::IoError: return "IO_ERROR";
    case ErrorCode::Internal: return "INTERNAL_ERROR";
  }
  return "UNKNOWN";
}

}  // namespace fide
