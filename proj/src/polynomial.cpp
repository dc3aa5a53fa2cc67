#include "dirinfo/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "dirinfo/errors.hpp"

namespace dirinfo {

namespace {

using cplx = std::complex<double>;

std::size_t leading_zero_count(const std::vector<double>& c) {
  std::size_t m = 0;
  while (m + 1 < c.size() && c[m] == 0.0) ++m;
  return m;
}

// p(d) = (1 - r d) q(d). Runs the recursion from whichever end keeps the
// multiplier |r|^{+-1} below one.
std::vector<cplx> deflate_once(const std::vector<cplx>& p, cplx r) {
  const std::size_t n = p.size() - 1;
  std::vector<cplx> q(n);
  if (std::abs(r) <= 1.0) {
    q[0] = p[0];
    for (std::size_t k = 1; k < n; ++k) q[k] = p[k] + r * q[k - 1];
  } else {
    q[n - 1] = -p[n] / r;
    for (std::size_t k = n - 1; k >= 1; --k) q[k - 1] = (q[k] - p[k]) / r;
  }
  return q;
}

}  // namespace

Polynomial::Polynomial(std::initializer_list<double> coeffs)
    : Polynomial(std::vector<double>(coeffs)) {}

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw InvalidInput("polynomial: empty coefficient list");
  for (double c : coeffs_) {
    if (!std::isfinite(c)) {
      throw InvalidInput("polynomial: non-finite coefficient");
    }
  }
  normalize();
}

void Polynomial::normalize() {
  while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
  // Collapse -0.0 so equality compares values only.
  for (double& c : coeffs_) {
    if (c == 0.0) c = 0.0;
  }
}

Polynomial Polynomial::delay(std::size_t power) {
  std::vector<double> c(power + 1, 0.0);
  c[power] = 1.0;
  return Polynomial(std::move(c));
}

Polynomial Polynomial::from_roots(std::span<const std::complex<double>> roots,
                                  double gain) {
  std::vector<cplx> acc{cplx(gain, 0.0)};
  for (const cplx& r : roots) {
    std::vector<cplx> next(acc.size() + 1, 0.0);
    for (std::size_t k = 0; k < acc.size(); ++k) {
      next[k] += acc[k];
      next[k + 1] -= r * acc[k];
    }
    acc = std::move(next);
  }
  std::vector<double> c(acc.size());
  std::transform(acc.begin(), acc.end(), c.begin(),
                 [](const cplx& v) { return v.real(); });
  return Polynomial(std::move(c));
}

double Polynomial::max_abs_coeff() const noexcept {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

std::complex<double> Polynomial::eval(std::complex<double> d) const noexcept {
  cplx acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * d + *it;
  return acc;
}

std::complex<double> Polynomial::eval_z(std::complex<double> z) const noexcept {
  cplx acc = 0.0;
  for (double c : coeffs_) acc = acc * z + c;
  return acc;
}

Polynomial Polynomial::operator-() const { return -1.0 * *this; }

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<double> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = a[k] + b[k];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  std::vector<double> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = a[k] - b[k];
  return Polynomial(std::move(c));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
      c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return Polynomial(std::move(c));
}

Polynomial operator*(double s, const Polynomial& a) {
  std::vector<double> c = a.coeffs_;
  for (double& v : c) v *= s;
  return Polynomial(std::move(c));
}

std::vector<std::complex<double>> poly_roots(const Polynomial& p) {
  const auto& all = p.coeffs();
  const std::size_t lead = leading_zero_count(all);
  const std::vector<double> a(all.begin() + static_cast<std::ptrdiff_t>(lead),
                              all.end());
  const std::size_t m = a.size() - 1;
  if (m == 0) return {};

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t k = 0; k < m; ++k) {
    companion(0, static_cast<Eigen::Index>(k)) = -a[k + 1] / a[0];
  }
  for (std::size_t k = 1; k < m; ++k) {
    companion(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k - 1)) = 1.0;
  }

  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw InvalidInput("poly_roots: eigenvalue iteration did not converge");
  }

  std::vector<cplx> roots(m);
  for (std::size_t k = 0; k < m; ++k) {
    const cplx r = solver.eigenvalues()(static_cast<Eigen::Index>(k));
    roots[k] = r.imag() == 0.0 ? cplx(r.real(), 0.0) : r;
  }
  std::sort(roots.begin(), roots.end(), [](const cplx& x, const cplx& y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return roots;
}

double relative_residual(const Polynomial& p, std::complex<double> r) noexcept {
  cplx value = 0.0;
  double scale = 0.0;
  const double ar = std::abs(r);
  for (double c : p.coeffs()) {
    value = value * r + c;
    scale = scale * ar + std::abs(c);
  }
  return scale > 0.0 ? std::abs(value) / scale : 0.0;
}

Polynomial deflate(const Polynomial& p,
                   std::span<const std::complex<double>> roots) {
  const auto& all = p.coeffs();
  const std::size_t lead = leading_zero_count(all);
  std::vector<cplx> q(all.begin() + static_cast<std::ptrdiff_t>(lead), all.end());
  if (roots.size() + 1 > q.size()) {
    throw InvalidInput("deflate: more roots than the polynomial degree");
  }
  for (const cplx& r : roots) q = deflate_once(q, r);

  std::vector<double> out(lead, 0.0);
  for (const cplx& v : q) out.push_back(v.real());
  return Polynomial(std::move(out));
}

}  // namespace dirinfo
