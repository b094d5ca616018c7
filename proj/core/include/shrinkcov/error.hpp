#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace shrinkcov {

enum class ErrorKind {
  InvalidInput,
  InvalidParameter,
  DegenerateSample,
  DegenerateDimension,
  MissingParameter,
  SingularMatrix,
  NonConvergence,
  ShapeMismatch,
  ExperimentFailed,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace shrinkcov
