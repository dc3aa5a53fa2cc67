#include "dirinfo/transfer_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dirinfo/errors.hpp"

namespace dirinfo {

namespace {

using cplx = std::complex<double>;

bool same_root(const Polynomial& a, cplx ra, const Polynomial& b, cplx rb) {
  if (std::abs(ra - rb) <= kCancellationTolerance * std::max(1.0, std::abs(ra))) {
    return true;
  }
  // Repeated roots come back from the eigenvalue solver perturbed by roughly
  // sqrt(eps); a vanishing residual on both sides still identifies them.
  constexpr double kResidualTolerance = 1e-13;
  return std::abs(ra - rb) <= 1e-6 * std::max(1.0, std::abs(ra)) &&
         relative_residual(b, ra) <= kResidualTolerance &&
         relative_residual(a, rb) <= kResidualTolerance;
}

std::vector<cplx> pad_origin(std::vector<cplx> roots, std::size_t order) {
  while (roots.size() < order) roots.emplace_back(0.0, 0.0);
  return roots;
}

}  // namespace

Reduction reduce_fraction(const Polynomial& num, const Polynomial& den) {
  if (den.is_zero()) throw InvalidInput("transfer function: zero denominator");
  if (den[0] == 0.0) {
    throw InvalidInput("transfer function: den[0] must be nonzero (causal, well-posed)");
  }
  if (num.is_zero()) {
    return {Polynomial::constant(0.0), Polynomial::constant(1.0), {}};
  }

  std::vector<cplx> num_roots = poly_roots(num);
  std::vector<cplx> den_roots = poly_roots(den);
  std::vector<cplx> cancel_num;
  std::vector<cplx> cancel_den;
  std::vector<bool> used(den_roots.size(), false);
  for (const cplx& rn : num_roots) {
    std::size_t best = den_roots.size();
    double best_dist = 0.0;
    for (std::size_t k = 0; k < den_roots.size(); ++k) {
      if (used[k] || !same_root(num, rn, den, den_roots[k])) continue;
      const double dist = std::abs(rn - den_roots[k]);
      if (best == den_roots.size() || dist < best_dist) {
        best = k;
        best_dist = dist;
      }
    }
    if (best != den_roots.size()) {
      used[best] = true;
      cancel_num.push_back(rn);
      cancel_den.push_back(den_roots[best]);
    }
  }

  Polynomial n = num;
  Polynomial d = den;
  if (!cancel_num.empty()) {
    n = deflate(num, cancel_num);
    d = deflate(den, cancel_den);
  }
  const double scale = 1.0 / d[0];
  std::vector<cplx> cancelled = cancel_den;
  return {scale * n, scale * d, std::move(cancelled)};
}

TransferFunction::TransferFunction(const Polynomial& num, const Polynomial& den) {
  Reduction r = reduce_fraction(num, den);
  num_ = std::move(r.num);
  den_ = std::move(r.den);
}

std::vector<std::complex<double>> TransferFunction::poles() const {
  return pad_origin(poly_roots(den_), order());
}

std::vector<std::complex<double>> TransferFunction::zeros() const {
  if (num_.is_zero()) return {};
  // Roots of the d^m factor sit at z = infinity and fall out of poly_roots.
  std::size_t lead = 0;
  while (num_[lead] == 0.0) ++lead;
  return pad_origin(poly_roots(num_), order() - lead);
}

bool TransferFunction::is_stable() const {
  for (const auto& p : poly_roots(den_)) {
    if (std::abs(p) >= kStabilityMargin) return false;
  }
  return true;
}

TransferFunction operator*(const TransferFunction& a, const TransferFunction& b) {
  return {a.num_ * b.num_, a.den_ * b.den_};
}

TransferFunction operator+(const TransferFunction& a, const TransferFunction& b) {
  return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}

TransferFunction operator-(const TransferFunction& a, const TransferFunction& b) {
  return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
}

std::complex<double> freq_response(const TransferFunction& tf, double omega) {
  const cplx d = std::polar(1.0, -omega);
  const cplx den = tf.den().eval(d);
  if (std::abs(den) <= 1e-12) {
    std::ostringstream msg;
    msg << "freq_response: pole on the unit circle at omega = " << omega;
    throw SingularityError(msg.str(), omega);
  }
  return tf.num().eval(d) / den;
}

}  // namespace dirinfo
