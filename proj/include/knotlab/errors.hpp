#pragma once

#include <stdexcept>
#include <string>

namespace knotlab {

/// Root of every error raised by the library. The CLI maps any of these to a
/// nonzero exit status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scalar map was evaluated where its denominator vanishes.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// A finite-difference stencil reaches within one step of a map pole.
class PoleProximityError : public Error {
 public:
  using Error::Error;
};

/// An integrand or intermediate quantity came out NaN or infinite.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// A particle state with |V| >= 1.
class SuperluminalError : public Error {
 public:
  using Error::Error;
};

/// Adaptive integrator could not make progress.
class StepSizeUnderflowError : public Error {
 public:
  StepSizeUnderflowError(const std::string& what, double t) : Error(what), time_(t) {}
  double time() const { return time_; }

 private:
  double time_;
};

class ZeroFieldError : public Error {
 public:
  using Error::Error;
};

class OpenCurveError : public Error {
 public:
  using Error::Error;
};

class NearIntersectionError : public Error {
 public:
  using Error::Error;
};

/// Violated precondition on a numeric argument.
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

}  // namespace knotlab
