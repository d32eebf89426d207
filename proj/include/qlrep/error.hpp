#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qlrep {

enum class ErrorKind {
  DegenerateDenominator,
  NotTrigonometric,
  NotHyperbolic,
  NotDoublyStochastic,
  BadWeights,
  NotOrthonormal,
  BadCoefficients,
  NormViolation,
  NonHermitianInput,
  EmptyFiltration,
  ZeroTotal,
  InvalidArgument,
  ParseError,
  SchemaError,
  IoError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind so the
/// CLI can map it onto a fixed exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qlrep
