#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace dirinfo {

/// Real polynomial in the unit-delay variable d = z^{-1}.
///
/// Coefficients are stored in ascending powers of d, so coeffs()[0] is the
/// constant term. Trailing zeros are stripped on construction; the zero
/// polynomial is represented by the single coefficient {0}.
///
/// Viewed in z, a polynomial of degree n corresponds to
/// z^n p(1/z) = c_0 z^n + c_1 z^{n-1} + ... + c_n, i.e. the same coefficient
/// sequence read in descending powers of z.
class Polynomial {
 public:
  Polynomial() : coeffs_{0.0} {}
  Polynomial(std::initializer_list<double> coeffs);
  explicit Polynomial(std::vector<double> coeffs);

  static Polynomial constant(double c) { return Polynomial({c}); }
  static Polynomial delay(std::size_t power = 1);

  /// Builds c * prod(1 - r d) over the given z-domain roots. Complex roots
  /// must come in conjugate pairs; imaginary residue is discarded.
  static Polynomial from_roots(std::span<const std::complex<double>> roots,
                               double gain = 1.0);

  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  std::size_t degree() const noexcept { return coeffs_.size() - 1; }
  bool is_zero() const noexcept {
    return coeffs_.size() == 1 && coeffs_[0] == 0.0;
  }
  double operator[](std::size_t k) const noexcept {
    return k < coeffs_.size() ? coeffs_[k] : 0.0;
  }
  double max_abs_coeff() const noexcept;

  /// Evaluates at a point of the delay variable.
  std::complex<double> eval(std::complex<double> d) const noexcept;
  /// Evaluates the z-form c_0 z^n + ... + c_n.
  std::complex<double> eval_z(std::complex<double> z) const noexcept;

  Polynomial operator-() const;
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double s, const Polynomial& a);
  friend bool operator==(const Polynomial& a, const Polynomial& b) = default;

 private:
  void normalize();

  std::vector<double> coeffs_;
};

/// Finite z-domain roots of the z-form of p, with multiplicity.
///
/// Leading zero coefficients of the d-form (factors of d) correspond to roots
/// at z = infinity and are omitted, so exactly degree(p) roots are returned
/// whenever p[0] != 0. Computed as companion-matrix eigenvalues.
std::vector<std::complex<double>> poly_roots(const Polynomial& p);

/// |p_z(r)| / sum_k |c_k| |r|^{n-k}: scale-free residual of a candidate root.
double relative_residual(const Polynomial& p, std::complex<double> r) noexcept;

/// Divides out the factors (1 - r d) for each r in roots. The result keeps
/// any exact leading d^m factor intact. Roots must be closed under
/// conjugation for the quotient to be real.
Polynomial deflate(const Polynomial& p,
                   std::span<const std::complex<double>> roots);

}  // namespace dirinfo
