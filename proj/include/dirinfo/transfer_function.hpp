#pragma once

#include <complex>
#include <vector>

#include "dirinfo/polynomial.hpp"

namespace dirinfo {

/// Common-root tolerance used when reducing num/den, on root distance
/// (scaled by max(1, |r|)).
inline constexpr double kCancellationTolerance = 1e-9;

/// Result of removing common roots from a fraction num/den.
struct Reduction {
  Polynomial num;
  Polynomial den;
  /// z-domain roots that were divided out of both polynomials.
  std::vector<std::complex<double>> cancelled;
};

/// Divides out common z-domain roots of num and den and rescales so that
/// den[0] == 1. Requires den[0] != 0.
Reduction reduce_fraction(const Polynomial& num, const Polynomial& den);

/// Causal SISO rational transfer function num(d)/den(d) in the delay variable.
///
/// Always held in reduced form with den[0] == 1.
class TransferFunction {
 public:
  /// Unity gain.
  TransferFunction() : num_(Polynomial::constant(1.0)), den_(Polynomial::constant(1.0)) {}
  TransferFunction(const Polynomial& num, const Polynomial& den);

  static TransferFunction gain(double k) {
    return {Polynomial::constant(k), Polynomial::constant(1.0)};
  }
  static TransferFunction delay(std::size_t power = 1) {
    return {Polynomial::delay(power), Polynomial::constant(1.0)};
  }

  const Polynomial& num() const noexcept { return num_; }
  const Polynomial& den() const noexcept { return den_; }

  /// State dimension of a minimal realization: max(deg num, deg den).
  std::size_t order() const noexcept {
    return std::max(num_.degree(), den_.degree());
  }
  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_strictly_proper() const noexcept { return num_[0] == 0.0; }
  /// Direct feedthrough, the value at d = 0.
  double feedthrough() const noexcept { return num_[0]; }

  /// z-domain poles, including poles at the origin implied by the order.
  std::vector<std::complex<double>> poles() const;
  /// z-domain zeros, including zeros at the origin implied by the order.
  std::vector<std::complex<double>> zeros() const;
  bool is_stable() const;

  TransferFunction operator-() const { return {-num_, den_}; }
  friend TransferFunction operator*(const TransferFunction& a, const TransferFunction& b);
  friend TransferFunction operator+(const TransferFunction& a, const TransferFunction& b);
  friend TransferFunction operator-(const TransferFunction& a, const TransferFunction& b);
  friend bool operator==(const TransferFunction&, const TransferFunction&) = default;

 private:
  Polynomial num_;
  Polynomial den_;
};

/// Frequency response num(e^{-j omega}) / den(e^{-j omega}).
/// Throws SingularityError when |den| <= 1e-12 at omega.
std::complex<double> freq_response(const TransferFunction& tf, double omega);

/// Largest pole magnitude considered stable.
inline constexpr double kStabilityMargin = 1.0 - 1e-9;

}  // namespace dirinfo
