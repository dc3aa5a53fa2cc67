#include "dirinfo/lti.hpp"

#include <cmath>
#include <sstream>

#include "dirinfo/errors.hpp"

namespace dirinfo {

namespace {

bool unstable(std::complex<double> p) { return std::abs(p) >= kStabilityMargin; }

}  // namespace

void NoiseSpec::validate() const {
  if (!std::isfinite(variance) || variance < 0.0) {
    throw InvalidInput("noise spec: variance must be finite and >= 0");
  }
  if (kind == NoiseKind::white) {
    if (shaping) throw InvalidInput("noise spec: white noise takes no shaping filter");
    return;
  }
  if (!shaping) throw InvalidInput("noise spec: colored noise requires a shaping filter");
  if (!shaping->is_stable()) {
    throw InvalidInput("noise spec: shaping filter poles must lie strictly inside the unit circle");
  }
  if (shaping->is_zero()) throw InvalidInput("noise spec: shaping filter is identically zero");
}

double NoiseSpec::psd_at(double omega) const {
  if (kind == NoiseKind::white) return variance;
  return variance * std::norm(freq_response(*shaping, omega));
}

void LoopModel::validate() const {
  channel_noise.validate();
  output_disturbance.validate();
  if (!initial_state.empty() && initial_state.size() != plant.order()) {
    std::ostringstream msg;
    msg << "loop model: initial_state has " << initial_state.size()
        << " entries, plant order is " << plant.order();
    throw InvalidInput(msg.str());
  }
  for (double x : initial_state) {
    if (!std::isfinite(x)) throw InvalidInput("loop model: non-finite initial state");
  }
  if (plant.feedthrough() != 0.0 && controller.feedthrough() != 0.0 &&
      feedback_filter.feedthrough() != 0.0) {
    throw InvalidInput(
        "loop model: loop gain P*K*H must be strictly proper (no algebraic loop)");
  }
}

ClosedLoop close_loop(const LoopModel& model) {
  model.validate();
  const TransferFunction& p = model.plant;
  const TransferFunction& k = model.controller;
  const TransferFunction& h = model.feedback_filter;

  // Unreduced products, so that cancellations between factors stay visible.
  const Polynomial den_l = p.den() * k.den() * h.den();
  const Polynomial num_l = p.num() * k.num() * h.num();
  const Polynomial return_diff = den_l - num_l;
  if (return_diff.is_zero()) throw DegenerateLoop("close_loop: 1 - L is identically zero");

  ClosedLoop cl;
  cl.loop_gain = TransferFunction(num_l, den_l);
  cl.f_wy = TransferFunction(den_l, return_diff);
  // H / (1 - L) with the H denominator cancelled symbolically.
  cl.f_vy = TransferFunction(h.num() * p.den() * k.den(), return_diff);
  cl.sensitivity = cl.f_wy;
  cl.char_poly = cl.f_wy.den();

  const std::size_t order = p.order() + k.order() + h.order();
  cl.closed_loop_poles = poly_roots(return_diff);
  while (cl.closed_loop_poles.size() < order) cl.closed_loop_poles.emplace_back(0.0, 0.0);

  for (const auto& r : reduce_fraction(num_l, den_l).cancelled) {
    if (unstable(r)) cl.unstable_cancellations.push_back(r);
  }
  cl.is_stable = true;
  for (const auto& pole : cl.closed_loop_poles) {
    if (unstable(pole)) cl.is_stable = false;
  }
  return cl;
}

StabilityReport is_stabilizing(const LoopModel& model) {
  StabilityReport report;
  ClosedLoop cl;
  try {
    cl = close_loop(model);
  } catch (const DegenerateLoop&) {
    return report;
  }
  report.poles = cl.closed_loop_poles;
  for (const auto& pole : cl.closed_loop_poles) {
    if (unstable(pole)) report.offending_poles.push_back(pole);
  }
  report.unstable_cancellations = cl.unstable_cancellations;
  report.stabilizing = cl.is_stable && cl.unstable_cancellations.empty();
  return report;
}

}  // namespace dirinfo
