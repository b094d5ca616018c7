#include "shrinkcov/error.hpp"

namespace shrinkcov {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::DegenerateSample: return "degenerate-sample";
    case ErrorKind::DegenerateDimension: return "degenerate-dimension";
    case ErrorKind::MissingParameter: return "missing-parameter";
    case ErrorKind::SingularMatrix: return "singular-matrix";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::ShapeMismatch: return "shape-mismatch";
    case ErrorKind::ExperimentFailed: return "experiment-failed";
  }
  return "unknown";
}

}  // namespace shrinkcov
