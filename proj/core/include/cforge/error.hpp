#pragma once

#include <stdexcept>
#include <string>

namespace cforge {

/// Failure categories. The numeric values double as CLI exit codes.
enum class ErrorKind : int {
  verification = 1,
  input = 2,
  fit = 3,
  solver = 4,
  pipeline = 5,
  domain = 6,
  quadrature = 7,
  internal = 8,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Bad user input: malformed files, invalid parameters, violated preconditions.
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorKind::input, what) {}
};

/// Underdetermined or poor-quality Fourier fit.
class FitError : public Error {
 public:
  explicit FitError(const std::string& what) : Error(ErrorKind::fit, what) {}
};

/// Singular block system, rejected (non-monotone) reparametrization.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double condition = 0.0)
      : Error(ErrorKind::solver, what), condition_(condition) {}

  /// Reciprocal condition estimate of the system when known, else 0.
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

/// Pipeline precondition failures (sector violation, self-intersection, ...).
class PipelineError : public Error {
 public:
  explicit PipelineError(const std::string& what, int stage = -1)
      : Error(ErrorKind::pipeline, what), stage_(stage) {}

  int stage() const noexcept { return stage_; }

 private:
  int stage_;
};

/// Argument outside the domain where an approximant is guaranteed (Re z <= 0).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double estimate)
      : Error(ErrorKind::quadrature, what), estimate_(estimate) {}

  double error_estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

}  // namespace cforge
