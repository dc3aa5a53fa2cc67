#include "dirinfo/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "dirinfo/errors.hpp"

namespace dirinfo {

namespace {

constexpr double kFormTolerance = 1e-10;

double log_max1(std::complex<double> p) { return std::log(std::max(1.0, std::abs(p))); }

ClosedLoop require_stable(const LoopModel& model) {
  const StabilityReport report = is_stabilizing(model);
  if (!report.stabilizing) {
    std::ostringstream msg;
    msg << "loop is not stabilized;";
    auto offending = report.offending_poles;
    for (const auto& p : offending) msg << " pole " << p;
    for (const auto& c : report.unstable_cancellations) {
      msg << " unstable cancellation at " << c;
      offending.push_back(c);
    }
    throw StabilityError(msg.str(), std::move(offending));
  }
  return close_loop(model);
}

// Frequency-domain pieces shared by every integrand.
struct LoopSpectra {
  const ClosedLoop& cl;
  const LoopModel& model;

  double sw(double w) const { return model.channel_noise.psd_at(w); }
  double sv(double w) const { return model.output_disturbance.psd_at(w); }
  double fwy2(double w) const { return std::norm(freq_response(cl.f_wy, w)); }
  double fvy2(double w) const { return std::norm(freq_response(cl.f_vy, w)); }
  double h2(double w) const { return std::norm(freq_response(model.feedback_filter, w)); }

  double sy(double w) const { return fwy2(w) * sw(w) + fvy2(w) * sv(w); }
  // Arguments of the logs; the rate integrands are half their logs.
  double total_arg(double w) const { return sy(w) / sw(w); }
  double ratio_form_arg(double w) const {
    return 1.0 + fvy2(w) * sv(w) / (fwy2(w) * sw(w));
  }
  double simplified_arg(double w) const { return 1.0 + h2(w) * sv(w) / sw(w); }
};

void check_noise_singularities(const LoopModel& model, const FrequencyGrid& grid) {
  // noise_psd owns the unit-circle checks on shaping filters.
  const SpectrumSamples sw = noise_psd(model.channel_noise, grid);
  noise_psd(model.output_disturbance, grid);
  for (std::size_t k = 0; k < sw.values.size(); ++k) {
    if (!(sw.values[k] > 1e-300)) {
      std::ostringstream msg;
      msg << "channel noise spectrum vanishes at omega = " << grid.omega(k);
      throw DivisionDomainError(msg.str(), grid.omega(k));
    }
  }
}

}  // namespace

double gaussian_entropy_rate(const SpectrumSamples& s) {
  return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e) +
         0.5 * log_integral(s);
}

double directed_info_rate(const RateInputs& inputs) {
  const ClosedLoop cl = require_stable(inputs.model);
  const SpectrumSamples sw = noise_psd(inputs.model.channel_noise, inputs.grid);
  const SpectrumSamples sv = noise_psd(inputs.model.output_disturbance, inputs.grid);
  const SpectrumSamples sy = output_psd(cl, sw, sv);
  return log_integral(sensitivity_ratio(sy, sw));
}

double bode_term_analytic(const ClosedLoop& /*cl*/, const TransferFunction& plant) {
  double sum = 0.0;
  for (const auto& p : plant.poles()) sum += log_max1(p);
  return sum;
}

double white_noise_disturbance_term(double sigma_v2, double sigma_w2) {
  if (!(sigma_w2 > 0.0) || !std::isfinite(sigma_w2)) {
    throw InvalidInput("white_noise_disturbance_term: sigma_w2 must be > 0");
  }
  if (!(sigma_v2 >= 0.0) || !std::isfinite(sigma_v2)) {
    throw InvalidInput("white_noise_disturbance_term: sigma_v2 must be >= 0");
  }
  return 0.5 * std::log1p(sigma_v2 / sigma_w2);
}

DecompositionReport decompose(const RateInputs& inputs) {
  const LoopModel& model = inputs.model;
  const ClosedLoop cl = require_stable(model);
  check_noise_singularities(model, inputs.grid);
  const LoopSpectra sp{cl, model};

  const SpectrumFn total_fn = [&](double w) { return sp.total_arg(w); };
  const SpectrumFn control_fn = [&](double w) { return sp.fwy2(w); };
  const SpectrumFn ratio_fn = [&](double w) { return sp.ratio_form_arg(w); };
  const SpectrumFn simplified_fn = [&](double w) { return sp.simplified_arg(w); };

  DecompositionReport r;

  // Settle on one grid for all integrals: refined if any integrand needed it.
  FrequencyGrid grid = inputs.grid;
  for (const SpectrumFn* fn : {&total_fn, &control_fn, &ratio_fn, &simplified_fn}) {
    const LogIntegral probe = integrate_log(*fn, inputs.grid);
    if (probe.refined) grid = FrequencyGrid(probe.grid_points);
  }
  if (!(grid == inputs.grid)) {
    std::ostringstream msg;
    msg << "near-singular spectrum: grid refined from " << inputs.grid.size() << " to "
        << grid.size() << " points";
    r.warnings.push_back(msg.str());
  }

  const LogIntegral total = integrate_log_fixed(total_fn, grid);
  const LogIntegral control = integrate_log_fixed(control_fn, grid);
  const LogIntegral ratio = integrate_log_fixed(ratio_fn, grid);
  const LogIntegral simplified = integrate_log_fixed(simplified_fn, grid);

  r.total_rate = directed_info_rate(RateInputs{model, grid});
  r.control_term = 0.5 * control.value;
  r.disturbance_term = 0.5 * ratio.value;
  r.disturbance_term_simplified = 0.5 * simplified.value;
  r.residual = r.total_rate - r.control_term - r.disturbance_term;
  r.grid_points = grid.size();
  r.convergence_estimate =
      0.5 * std::max({total.convergence_estimate, control.convergence_estimate,
                      ratio.convergence_estimate, simplified.convergence_estimate});

  const double form_gap = std::abs(r.disturbance_term - r.disturbance_term_simplified);
  if (form_gap > kFormTolerance) {
    std::ostringstream msg;
    msg << "decompose: disturbance integrand forms disagree by " << form_gap;
    throw ConsistencyError(msg.str());
  }

  r.plant_poles = model.plant.poles();
  r.closed_loop_poles = cl.closed_loop_poles;
  r.bode_analytic = bode_term_analytic(cl, model.plant);
  r.bode_loop_analytic = r.bode_analytic;
  for (const auto& p : model.controller.poles()) r.bode_loop_analytic += log_max1(p);
  for (const auto& p : model.feedback_filter.poles()) r.bode_loop_analytic += log_max1(p);
  if (r.bode_loop_analytic != r.bode_analytic) {
    r.warnings.push_back(
        "controller or feedback filter has unstable poles; the plant-pole Bode value "
        "excludes them");
  }
  for (const auto& p : r.plant_poles) r.bode_literal_sum += std::max(0.0, p.real());
  r.bode_literal_differs = std::abs(r.bode_literal_sum - r.bode_analytic) > 1e-6;
  return r;
}

IndependenceReport controller_independence_check(
    const LoopModel& model, std::span<const TransferFunction> controllers,
    const FrequencyGrid& grid) {
  IndependenceReport report;
  for (std::size_t i = 0; i < controllers.size(); ++i) {
    const LoopModel m = model.with_controller(controllers[i]);
    if (!is_stabilizing(m).stabilizing) {
      std::ostringstream msg;
      msg << "controller #" << i << " does not stabilize the loop";
      throw StabilityError(msg.str(), is_stabilizing(m).offending_poles);
    }
    report.disturbance_terms.push_back(decompose(RateInputs{m, grid}).disturbance_term);
  }
  const auto& d = report.disturbance_terms;
  if (!d.empty()) {
    const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
    report.max_deviation = *hi - *lo;
  }
  report.pass = report.max_deviation < kIndependenceTolerance;
  return report;
}

void write_integrands_csv(std::ostream& out, const RateInputs& inputs) {
  const ClosedLoop cl = require_stable(inputs.model);
  check_noise_singularities(inputs.model, inputs.grid);
  const LoopSpectra sp{cl, inputs.model};
  out << "omega,log_Syw,log_Fwy,disturbance_integrand\n" << std::setprecision(12);
  for (std::size_t k = 0; k < inputs.grid.size(); ++k) {
    const double w = inputs.grid.omega(k);
    out << w << ',' << 0.5 * std::log(sp.total_arg(w)) << ','
        << 0.5 * std::log(sp.fwy2(w)) << ',' << 0.5 * std::log(sp.ratio_form_arg(w))
        << '\n';
  }
}

}  // namespace dirinfo
