#include "dirinfo/design.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "dirinfo/errors.hpp"

namespace dirinfo {

namespace {

using cplx = std::complex<double>;

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool chance(double p) { return uniform(0.0, 1.0) < p; }
  double sign() { return chance(0.5) ? 1.0 : -1.0; }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  // count roots with magnitude in [lo, hi]; conjugate pairs kept together.
  std::vector<cplx> roots(std::size_t count, double lo, double hi) {
    std::vector<cplx> out;
    while (out.size() < count) {
      const double mag = uniform(lo, hi);
      if (count - out.size() >= 2 && chance(0.4)) {
        const double angle = uniform(0.2, std::numbers::pi - 0.2);
        out.push_back(std::polar(mag, angle));
        out.push_back(std::polar(mag, -angle));
      } else {
        out.emplace_back(sign() * mag, 0.0);
      }
    }
    return out;
  }

  // (1 + a d) / (1 - b d)
  TransferFunction first_order(double max_coeff) {
    const double a = uniform(-max_coeff, max_coeff);
    const double b = uniform(-max_coeff, max_coeff);
    return {Polynomial{1.0, a}, Polynomial{1.0, -b}};
  }

  NoiseSpec noise(double var_lo, double var_hi) {
    const double var = uniform(var_lo, var_hi);
    if (chance(0.5)) return NoiseSpec::white(var);
    return NoiseSpec::colored(var, first_order(0.7));
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

TransferFunction place_poles(const TransferFunction& open_loop,
                             std::span<const std::complex<double>> closed_loop_poles) {
  if (!open_loop.is_strictly_proper() || open_loop.is_zero()) {
    throw InvalidInput("place_poles: open loop must be nonzero and strictly proper");
  }
  const Polynomial& dg = open_loop.den();
  const Polynomial& ng = open_loop.num();
  const std::size_t n = open_loop.order();
  const std::size_t m = 2 * n - 1;
  if (closed_loop_poles.size() != m) {
    throw InvalidInput("place_poles: need exactly 2n - 1 closed-loop poles");
  }
  for (const cplx& r : closed_loop_poles) {
    const bool paired = std::any_of(closed_loop_poles.begin(), closed_loop_poles.end(),
                                    [&](const cplx& q) { return std::abs(q - std::conj(r)) <= 1e-12; });
    if (!paired) throw InvalidInput("place_poles: complex poles must come in conjugate pairs");
  }
  const Polynomial target = Polynomial::from_roots(closed_loop_poles);

  // Unknowns: den_K[1..n-1] then num_K[0..n-1]; equations: powers d^1..d^m.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m),
                                            static_cast<Eigen::Index>(m));
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(m));
  for (std::size_t j = 1; j <= m; ++j) {
    const auto row = static_cast<Eigen::Index>(j - 1);
    for (std::size_t i = 1; i < n; ++i) {
      if (i <= j) a(row, static_cast<Eigen::Index>(i - 1)) = dg[j - i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i <= j) a(row, static_cast<Eigen::Index>(n - 1 + i)) = -ng[j - i];
    }
    rhs(row) = target[j] - dg[j];
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible() || lu.rcond() < 1e-12) {
    throw InvalidInput("place_poles: plant numerator and denominator are not coprime");
  }
  const Eigen::VectorXd x = lu.solve(rhs);

  std::vector<double> den_k(n, 0.0);
  std::vector<double> num_k(n, 0.0);
  den_k[0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) den_k[i] = x(static_cast<Eigen::Index>(i - 1));
  for (std::size_t i = 0; i < n; ++i) num_k[i] = x(static_cast<Eigen::Index>(n - 1 + i));
  return {Polynomial(num_k), Polynomial(den_k)};
}

LoopModel random_stabilized_loop(std::uint64_t seed) {
  Sampler s(seed);
  for (;;) {
    const auto order = static_cast<std::size_t>(s.integer(1, 3));
    std::vector<cplx> plant_poles;
    for (std::size_t k = 0; k < order; ++k) {
      if (s.chance(0.35)) {
        plant_poles.emplace_back(s.sign() * s.uniform(1.2, 3.0), 0.0);
      } else {
        plant_poles.emplace_back(s.sign() * s.uniform(0.0, 0.85), 0.0);
      }
    }
    if (order >= 2 && s.chance(0.3)) {
      const double mag = s.chance(0.5) ? s.uniform(1.2, 2.0) : s.uniform(0.1, 0.85);
      const double angle = s.uniform(0.2, std::numbers::pi - 0.2);
      plant_poles[0] = std::polar(mag, angle);
      plant_poles[1] = std::polar(mag, -angle);
    }
    const auto rel_deg = static_cast<std::size_t>(s.integer(1, static_cast<int>(order)));
    std::vector<double> num(order + 1, 0.0);
    for (std::size_t k = rel_deg; k <= order; ++k) num[k] = s.uniform(-2.0, 2.0);
    num[rel_deg] = s.sign() * s.uniform(0.5, 2.0);

    LoopModel model;
    model.plant = TransferFunction(Polynomial(num), Polynomial::from_roots(plant_poles));
    model.feedback_filter = s.chance(0.5) ? TransferFunction{} : s.first_order(0.8);
    model.channel_noise = s.noise(0.2, 3.0);
    model.output_disturbance = s.noise(0.0, 3.0);

    const TransferFunction g = model.plant * model.feedback_filter;
    if (g.is_zero() || g.order() == 0) continue;
    const std::vector<cplx> targets = s.roots(2 * g.order() - 1, 0.0, 0.5);
    try {
      model.controller = place_poles(g, targets);
    } catch (const InvalidInput&) {
      continue;
    }
    if (is_stabilizing(model).stabilizing) return model;
  }
}

LoopModel random_stable_plant_loop(std::uint64_t seed) {
  Sampler s(seed);
  for (;;) {
    const auto order = static_cast<std::size_t>(s.integer(1, 3));
    const std::vector<cplx> poles = s.roots(order, 0.0, 0.85);
    std::vector<double> num(order + 1, 0.0);
    for (std::size_t k = 1; k <= order; ++k) num[k] = s.uniform(-1.0, 1.0);
    num[1] = s.sign() * s.uniform(0.2, 1.0);

    LoopModel model;
    model.plant = TransferFunction(Polynomial(num), Polynomial::from_roots(poles));
    model.controller = TransferFunction::gain(s.uniform(-0.3, 0.3));
    if (is_stabilizing(model).stabilizing) return model;
  }
}

}  // namespace dirinfo
