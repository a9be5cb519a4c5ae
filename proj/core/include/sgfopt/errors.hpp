#pragma once

#include <stdexcept>
#include <string>

namespace sgfopt {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation was not met by the caller.
class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

/// Two fields (or a field and a problem) live on different grids.
class GridMismatch : public PreconditionViolation {
 public:
  using PreconditionViolation::PreconditionViolation;
};

/// An elliptic solve did not reach the residual tolerance.
class SolverDivergence : public Error {
 public:
  using Error::Error;
};

/// Non-finite values appeared during time stepping.
class BlowUpError : public Error {
 public:
  BlowUpError(int step, const std::string& what)
      : Error("blow-up at step " + std::to_string(step) + ": " + what), step_(step) {}
  int step() const noexcept { return step_; }

 private:
  int step_;
};

/// A ProblemData invariant is violated; `field()` names the offending parameter.
class InvalidProblem : public Error {
 public:
  InvalidProblem(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Malformed text or binary input.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Configuration rejected. `line()` is 0 when the error is not tied to a line.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0, std::string field = {})
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line),
        field_(std::move(field)) {}
  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  int line_;
  std::string field_;
};

}  // namespace sgfopt
