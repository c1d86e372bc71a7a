#pragma once

#include <stdexcept>
#include <string>

namespace ncva {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent configuration (bad field values, schema
/// violations). Maps to CLI exit code 1.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Absorber/target/disturbance placement for which the resonant
/// substructure cannot be formed (requires p <= n <= dist).
class DeploymentError : public Error {
 public:
  using Error::Error;
};

/// The passive resonant substructure is singular at the requested
/// frequency; the tuned gain degenerates to zero. Maps to CLI exit code 2.
class DegenerateTuningError : public Error {
 public:
  using Error::Error;
};

/// Frequency-response evaluation hit a pole of the closed loop.
class PoleHitError : public Error {
 public:
  PoleHitError(const std::string& what, double omega)
      : Error(what), omega_rad_s(omega) {}
  double omega_rad_s;
};

/// Simulated state exceeded the overflow guard. Maps to CLI exit code 3.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, double t) : Error(what), time_s(t) {}
  double time_s;
};

/// An iterative procedure (root search, contour counting, spectral
/// discretization) failed to converge within its budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace ncva
