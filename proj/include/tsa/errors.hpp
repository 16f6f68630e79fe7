#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tsa {

/// Argument outside the mathematical domain of an operation (alpha <= 2,
/// p outside (0,1], eta outside (0,1], ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Requested root branch does not exist for the given operating point.
class BranchNotPresent : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A precondition on the operating regime was violated (e.g. safe tuning
/// requested where the unconstrained optimum is already monostable).
class PreconditionError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Invalid simulation or sweep configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative procedure exhausted its budget. Carries the last iterate and
/// the trace of monitored values, if any.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_value,
                   std::vector<double> trace = {})
      : std::runtime_error(what), last_value_(last_value), trace_(std::move(trace)) {}

  double last_value() const noexcept { return last_value_; }
  const std::vector<double>& trace() const noexcept { return trace_; }

 private:
  double last_value_;
  std::vector<double> trace_;
};

/// Internal-consistency failure of a bracketed solver (a bracket that the
/// analysis guarantees turned out not to contain a sign change).
class BracketError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace tsa
