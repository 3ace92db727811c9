#pragma once

#include <stdexcept>
#include <string>

namespace quadfield {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: malformed configuration, bad initial data.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A numerical failure attributable to a module at a time point.
class NumericalError : public Error {
 public:
  NumericalError(std::string module, double t, const std::string& message)
      : Error(module + " (t=" + std::to_string(t) + "): " + message),
        module_(std::move(module)),
        t_(t) {}

  const std::string& module() const noexcept { return module_; }
  double time() const noexcept { return t_; }

 private:
  std::string module_;
  double t_;
};

/// A coefficient function returned a non-finite value or violates a
/// structural requirement such as a(t) != 0.
class CoefficientError : public NumericalError {
 public:
  CoefficientError(const std::string& function, double t, const std::string& message)
      : NumericalError("coefficients", t, function + ": " + message), function_(function) {}

  const std::string& function() const noexcept { return function_; }

 private:
  std::string function_;
};

class InvalidMediumError : public NumericalError {
 public:
  InvalidMediumError(double t, const std::string& message)
      : NumericalError("coefficients", t, message) {}
};

/// Adaptive step size fell below the representable resolution.
class StiffnessError : public NumericalError {
 public:
  StiffnessError(const std::string& what, double t)
      : NumericalError(what, t, "step size underflow; problem is stiff or singular") {}
};

/// Evaluation of a homogeneous piece too close to a zero of mu0.
class SingularityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Literal quadrature requested across a zero of mu0'.
class TurningPointError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Direct Riccati integration left the admissible region.
class BlowUpError : public NumericalError {
 public:
  BlowUpError(double last_good_t, const std::string& message)
      : NumericalError("verify", last_good_t, message), last_good_t_(last_good_t) {}

  double last_good_time() const noexcept { return last_good_t_; }

 private:
  double last_good_t_;
};

class InvalidStateError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Too many stochastic paths failed.
class EnsembleError : public Error {
 public:
  using Error::Error;
};

}  // namespace quadfield
