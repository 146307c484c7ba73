#include "regop/errors.hpp"

namespace regop {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::UnknownFiber: return "UnknownFiber";
    case ErrorCode::NotMultiplication: return "NotMultiplication";
    case ErrorCode::SingularResolvent: return "SingularResolvent";
    case ErrorCode::NotDense: return "NotDense";
    case ErrorCode::NotIsometry: return "NotIsometry";
    case ErrorCode::Eq61Violated: return "Eq61Violated";
    case ErrorCode::NotCoisometry: return "NotCoisometry";
    case ErrorCode::Eq62Violated: return "Eq62Violated";
    case ErrorCode::NotRestriction: return "NotRestriction";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::UnexpectedKernelDim: return "UnexpectedKernelDim";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::IllDefined: return "IllDefined";
    case ErrorCode::GaugeNotContinuous: return "GaugeNotContinuous";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::MalformedSpec: return "MalformedSpec";
  }
  return "Unknown";
}

}  // namespace regop
