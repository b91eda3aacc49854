#pragma once

#include <stdexcept>
#include <string>

namespace qrelent {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated an operation's precondition (bad index, empty set, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: the inputs were well-formed but the computation could
/// not be carried out or produced an out-of-contract result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Spectrum at or below the floor where log/sqrt is required.
class DomainError : public NumericalError {
 public:
  DomainError(const std::string& what, double offending_eigenvalue)
      : NumericalError(what), eigenvalue_(offending_eigenvalue) {}
  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double residual)
      : NumericalError(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class PositivityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TraceDriftError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TruncationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Two independent constructions of the same object disagreed.
class ConsistencyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InfeasibleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class CapacityError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

}  // namespace qrelent
