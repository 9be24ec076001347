#pragma once

#include <stdexcept>
#include <string>

namespace fullbody {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input matrix is not skew-symmetric within tolerance.
class NonSkewInput : public Error {
public:
  using Error::Error;
};

/// Input matrix is not symmetric within tolerance.
class NonSymmetricInput : public Error {
public:
  using Error::Error;
};

/// Matrix failed the rotation-group membership gate.
class NotARotation : public Error {
public:
  using Error::Error;
};

/// Body mass must be strictly positive.
class NonPositiveMass : public Error {
public:
  using Error::Error;
};

/// Two point masses came closer than the configured minimum separation.
class BodiesOverlap : public Error {
public:
  BodiesOverlap(const std::string& what, double separation)
      : Error(what), separation(separation) {}
  double separation;
};

/// A moment-of-inertia matrix that must be inverted is singular.
class SingularInertia : public Error {
public:
  using Error::Error;
};

/// Linear solve inside the Newton iteration failed.
class SingularJacobian : public Error {
public:
  using Error::Error;
};

/// Implicit solver exhausted its iteration budget.
class NoConvergence : public Error {
public:
  NoConvergence(const std::string& what, int iterations, double residual)
      : Error(what), iterations(iterations), residual(residual) {}
  int iterations;
  double residual;
};

/// Physical-unit configuration is inconsistent or non-positive.
class InvalidPhysicalUnits : public Error {
public:
  using Error::Error;
};

/// Run configuration file is malformed or incomplete.
class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace fullbody
