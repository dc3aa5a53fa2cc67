#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace dirinfo {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: non-finite coefficients, bad sizes, mismatched grids.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A frequency response was requested at a pole on the unit circle.
class SingularityError : public Error {
 public:
  SingularityError(const std::string& what, double omega)
      : Error(what), omega_(omega) {}
  double omega() const noexcept { return omega_; }

 private:
  double omega_;
};

/// 1 - L vanished identically.
class DegenerateLoop : public Error {
 public:
  using Error::Error;
};

/// log() of a nonpositive spectral sample.
class LogDomainError : public Error {
 public:
  LogDomainError(const std::string& what, double omega, double value)
      : Error(what), omega_(omega), value_(value) {}
  double omega() const noexcept { return omega_; }
  double value() const noexcept { return value_; }

 private:
  double omega_;
  double value_;
};

/// Division by a (numerically) zero spectrum.
class DivisionDomainError : public Error {
 public:
  DivisionDomainError(const std::string& what, double omega)
      : Error(what), omega_(omega) {}
  double omega() const noexcept { return omega_; }

 private:
  double omega_;
};

/// Samples below the near-singular floor survived grid refinement.
class NearSingularError : public Error {
 public:
  NearSingularError(const std::string& what, double omega)
      : Error(what), omega_(omega) {}
  double omega() const noexcept { return omega_; }

 private:
  double omega_;
};

/// The loop is not stabilized; carries the offending closed-loop poles.
class StabilityError : public Error {
 public:
  StabilityError(const std::string& what,
                 std::vector<std::complex<double>> offending)
      : Error(what), offending_(std::move(offending)) {}
  const std::vector<std::complex<double>>& offending_poles() const noexcept {
    return offending_;
  }

 private:
  std::vector<std::complex<double>> offending_;
};

/// A simulated signal left the representable range.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t step, double value)
      : Error(what), step_(step), value_(value) {}
  std::size_t step() const noexcept { return step_; }
  double value() const noexcept { return value_; }

 private:
  std::size_t step_;
  double value_;
};

/// Two algebraically equal computations disagreed beyond tolerance.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace dirinfo
