#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dirinfo/lti.hpp"
#include "dirinfo/spectral.hpp"

namespace dirinfo {

/// A loop and the grid its spectral integrals are evaluated on.
struct RateInputs {
  LoopModel model;
  FrequencyGrid grid;
};

/// Split of the feedback-channel rate I(Z -> Y) into the sensitivity
/// (control) term and the disturbance-transmission term. All rates in nats
/// per sample.
struct DecompositionReport {
  double total_rate = 0.0;
  /// (1/2pi) int log|F_wy|
  double control_term = 0.0;
  /// (1/2pi) int 1/2 log(1 + |F_vy|^2 S_V / (|F_wy|^2 S_W))
  double disturbance_term = 0.0;
  /// Same integral with the integrand reduced to 1/2 log(1 + |H|^2 S_V / S_W).
  double disturbance_term_simplified = 0.0;
  double residual = 0.0;
  /// sum ln max(1, |lambda|) over plant poles.
  double bode_analytic = 0.0;
  /// sum ln max(1, |lambda|) over every pole of P, K and H; equals the
  /// control term for any stabilized loop with strictly proper L.
  double bode_loop_analytic = 0.0;
  /// sum max(0, Re lambda) over plant poles, the pole sum read literally.
  double bode_literal_sum = 0.0;
  bool bode_literal_differs = false;
  std::size_t grid_points = 0;
  /// Largest doubled-grid change |I(2n) - I(n)| among the three integrals.
  double convergence_estimate = 0.0;
  std::vector<std::complex<double>> plant_poles;
  std::vector<std::complex<double>> closed_loop_poles;
  std::vector<std::string> warnings;
};

/// (1/2pi) int 1/2 ln(2 pi e s(w)) dw.
double gaussian_entropy_rate(const SpectrumSamples& s);

/// I(Z -> Y) = log_integral(sensitivity_ratio(S_Y, S_W)). Throws
/// StabilityError for a non-stabilized loop.
double directed_info_rate(const RateInputs& inputs);

/// Evaluates all terms of the decomposition. Throws StabilityError,
/// spectral domain errors, or ConsistencyError if the two disturbance
/// integrand forms disagree by more than 1e-10.
DecompositionReport decompose(const RateInputs& inputs);

/// sum over plant poles of ln max(1, |lambda|).
double bode_term_analytic(const ClosedLoop& cl, const TransferFunction& plant);

/// 1/2 ln(1 + sigma_v2 / sigma_w2).
double white_noise_disturbance_term(double sigma_v2, double sigma_w2);

struct IndependenceReport {
  std::vector<double> disturbance_terms;
  double max_deviation = 0.0;
  bool pass = true;
};

inline constexpr double kIndependenceTolerance = 1e-9;

/// Disturbance term of the model under each controller in turn. PASS iff
/// the largest pairwise deviation is below kIndependenceTolerance.
IndependenceReport controller_independence_check(
    const LoopModel& model, std::span<const TransferFunction> controllers,
    const FrequencyGrid& grid = FrequencyGrid{});

/// Per-frequency integrands: omega, log S_{Y,W}, log|F_wy|, disturbance.
void write_integrands_csv(std::ostream& out, const RateInputs& inputs);

}  // namespace dirinfo
