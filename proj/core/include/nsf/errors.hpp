#pragma once

#include <stdexcept>
#include <string>

namespace nsf {

/// Argument outside the domain of a thermodynamic function (nonpositive density
/// or temperature, nonfinite input).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A documented precondition of an operation does not hold (boundary
/// compatibility, grid conformity, empty sample set, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A time step was rejected: CFL violation, temperature inversion failure or
/// loss of positivity.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invalid configuration text. `line()` is 0 when the problem is
/// not tied to a particular line (e.g. a missing required key).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace nsf
