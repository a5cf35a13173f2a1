#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qdelaunay {

enum class ErrorKind {
  InvalidParameter,
  NonPositiveV,
  QuadratureFailure,
  StepFloor,
  MaxSteps,
  NoTurningPoint,
  BracketFailure,
  NoConvergence,
  EigenFailure,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base of every numerical failure raised by the library. The kind is kept
/// alongside the type so callers that aggregate failures (sweeps, selfcheck,
/// the CLI exit-code mapping) can switch on it without a catch ladder.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define QDELAUNAY_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what) : Error(ErrorKind::Name, what) {} \
  };

QDELAUNAY_DEFINE_ERROR(InvalidParameter)
QDELAUNAY_DEFINE_ERROR(NonPositiveV)
QDELAUNAY_DEFINE_ERROR(QuadratureFailure)
QDELAUNAY_DEFINE_ERROR(StepFloor)
QDELAUNAY_DEFINE_ERROR(MaxSteps)
QDELAUNAY_DEFINE_ERROR(NoTurningPoint)
QDELAUNAY_DEFINE_ERROR(BracketFailure)
QDELAUNAY_DEFINE_ERROR(NoConvergence)
QDELAUNAY_DEFINE_ERROR(EigenFailure)

#undef QDELAUNAY_DEFINE_ERROR

/// Rethrows an Error of the given kind. Used where failures are stored by
/// kind (e.g. per grid point in a sweep) and later re-raised.
[[noreturn]] void throw_error(ErrorKind kind, const std::string& what);

}  // namespace qdelaunay
