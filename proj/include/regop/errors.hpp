#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace regop {

enum class ErrorCode {
  NotPSD,
  UnknownFiber,
  NotMultiplication,
  SingularResolvent,
  NotDense,
  NotIsometry,
  Eq61Violated,
  NotCoisometry,
  Eq62Violated,
  NotRestriction,
  GridTooCoarse,
  UnexpectedKernelDim,
  DomainViolation,
  IllDefined,
  GaugeNotContinuous,
  ShapeMismatch,
  PreconditionViolated,
  MalformedSpec,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        double residual = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        residual_(residual) {}

  ErrorCode code() const noexcept { return code_; }
  // Offending residual, when the failure is a failed identity. NaN otherwise.
  double residual() const noexcept { return residual_; }

 private:
  ErrorCode code_;
  double residual_;
};

}  // namespace regop
