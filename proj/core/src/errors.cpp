#include "qdelaunay/errors.hpp"

namespace qdelaunay {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::NonPositiveV: return "NonPositiveV";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::StepFloor: return "StepFloor";
    case ErrorKind::MaxSteps: return "MaxSteps";
    case ErrorKind::NoTurningPoint: return "NoTurningPoint";
    case ErrorKind::BracketFailure: return "BracketFailure";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::EigenFailure: return "EigenFailure";
  }
  return "Unknown";
}

void throw_error(ErrorKind kind, const std::string& what) {
  switch (kind) {
    case ErrorKind::InvalidParameter: throw InvalidParameter(what);
    case ErrorKind::NonPositiveV: throw NonPositiveV(what);
    case ErrorKind::QuadratureFailure: throw QuadratureFailure(what);
    case ErrorKind::StepFloor: throw StepFloor(what);
    case ErrorKind::MaxSteps: throw MaxSteps(what);
    case ErrorKind::NoTurningPoint: throw NoTurningPoint(what);
    case ErrorKind::BracketFailure: throw BracketFailure(what);
    case ErrorKind::NoConvergence: throw NoConvergence(what);
    case ErrorKind::EigenFailure: throw EigenFailure(what);
  }
  throw Error(kind, what);
}

}  // namespace qdelaunay
