#include "dirinfo/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include <fftw3.h>

#include "dirinfo/decomposition.hpp"
#include "dirinfo/errors.hpp"

namespace dirinfo {

namespace {

constexpr double kDivergenceBound = 1e12;
constexpr double kPsdFloor = 1e-12;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Owns an FFTW real-to-complex plan and its aligned buffers.
class RealFft {
 public:
  explicit RealFft(std::size_t n)
      : n_(n),
        in_(fftw_alloc_real(n)),
        out_(fftw_alloc_complex(n / 2 + 1)),
        plan_(fftw_plan_dft_r2c_1d(static_cast<int>(n), in_, out_, FFTW_ESTIMATE)) {}
  ~RealFft() {
    fftw_destroy_plan(plan_);
    fftw_free(out_);
    fftw_free(in_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  double* input() noexcept { return in_; }
  void execute() noexcept { fftw_execute(plan_); }
  double power(std::size_t bin) const noexcept {
    return out_[bin][0] * out_[bin][0] + out_[bin][1] * out_[bin][1];
  }

 private:
  std::size_t n_;
  double* in_;
  fftw_complex* out_;
  fftw_plan plan_;
};

// Independent Gaussian stream per noise source.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::uint32_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      stream};
    rng_.seed(seq);
  }
  double scaled(double sd) {
    const double e = normal_(rng_);
    return sd > 0.0 ? sd * e : 0.0;
  }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
};

void check_bounded(double value, std::size_t t, const char* signal) {
  if (!std::isfinite(value) || std::abs(value) > kDivergenceBound) {
    std::ostringstream msg;
    msg << "simulate_loop: signal " << signal << " diverged at step " << t
        << " (value " << value << "); the loop is not stabilized";
    throw DivergenceError(msg.str(), t, value);
  }
}

}  // namespace

void SimulationConfig::validate() const {
  model.validate();
  if (n_samples == 0 || n_samples <= burn_in) {
    throw InvalidInput("simulation: n_samples must exceed burn_in");
  }
}

void WelchParams::validate() const {
  if (!is_power_of_two(segment_length)) {
    throw InvalidInput("welch: segment_length must be a power of two");
  }
  if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0)) {
    throw InvalidInput("welch: overlap_fraction must lie in [0, 1)");
  }
}

LtiFilter::LtiFilter(const TransferFunction& tf, std::span<const double> initial_state) {
  const std::size_t n = tf.order();
  b_.resize(n + 1);
  a_.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    b_[k] = tf.num()[k];
    a_[k] = tf.den()[k];
  }
  state_.assign(n, 0.0);
  if (!initial_state.empty()) {
    if (initial_state.size() != n) throw InvalidInput("LtiFilter: initial state size mismatch");
    std::copy(initial_state.begin(), initial_state.end(), state_.begin());
  }
}

double LtiFilter::step(double x) noexcept {
  const double y = b_[0] * x + pending();
  const std::size_t n = state_.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    state_[i] = state_[i + 1] + b_[i + 1] * x - a_[i + 1] * y;
  }
  if (n > 0) state_[n - 1] = b_[n] * x - a_[n] * y;
  return y;
}

TrajectorySet simulate_loop(const SimulationConfig& cfg) {
  cfg.validate();
  const LoopModel& m = cfg.model;
  LtiFilter plant(m.plant, m.initial_state);
  LtiFilter controller(m.controller);
  LtiFilter filter(m.feedback_filter);
  LtiFilter shape_w(m.channel_noise.filter());
  LtiFilter shape_v(m.output_disturbance.filter());
  GaussianStream noise_w(cfg.seed, 0);
  GaussianStream noise_v(cfg.seed, 1);
  const double sd_w = std::sqrt(m.channel_noise.variance);
  const double sd_v = std::sqrt(m.output_disturbance.variance);

  TrajectorySet traj;
  traj.seed = cfg.seed;
  traj.sample_count = cfg.n_samples;
  for (auto* sig : {&traj.y, &traj.w, &traj.v, &traj.z, &traj.u}) sig->reserve(cfg.n_samples);

  // Strict properness puts a zero feedthrough somewhere in the loop; start
  // the sweep right after it so each signal is computed once, causally.
  enum class Start { controller, plant, filter };
  const Start start = controller.feedthrough() == 0.0 ? Start::controller
                      : plant.feedthrough() == 0.0    ? Start::plant
                                                      : Start::filter;

  const std::size_t total = cfg.n_samples + cfg.burn_in;
  for (std::size_t t = 0; t < total; ++t) {
    const double w = shape_w.step(noise_w.scaled(sd_w));
    const double v = shape_v.step(noise_v.scaled(sd_v));
    double u = 0.0;
    double p = 0.0;
    double z = 0.0;
    double y = 0.0;
    switch (start) {
      case Start::controller:
        u = controller.pending();
        p = plant.step(u);
        z = filter.step(p + v);
        y = z + w;
        controller.step(y);
        break;
      case Start::plant:
        p = plant.pending();
        z = filter.step(p + v);
        y = z + w;
        u = controller.step(y);
        plant.step(u);
        break;
      case Start::filter:
        z = filter.pending();
        y = z + w;
        u = controller.step(y);
        p = plant.step(u);
        filter.step(p + v);
        break;
    }
    check_bounded(y, t, "y");
    check_bounded(u, t, "u");
    check_bounded(z, t, "z");
    check_bounded(p, t, "plant output");
    if (t >= cfg.burn_in) {
      traj.y.push_back(y);
      traj.w.push_back(w);
      traj.v.push_back(v);
      traj.z.push_back(z);
      traj.u.push_back(u);
    }
  }
  return traj;
}

SpectrumSamples welch_psd(std::span<const double> x, const WelchParams& params,
                          const FrequencyGrid& grid) {
  params.validate();
  const std::size_t len = params.segment_length;
  if (x.size() < len) throw InvalidInput("welch: sequence shorter than one segment");
  const auto overlap = static_cast<std::size_t>(std::floor(static_cast<double>(len) *
                                                           params.overlap_fraction));
  const std::size_t hop = std::max<std::size_t>(1, len - overlap);

  // Periodic Hann.
  std::vector<double> window(len);
  double window_power = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                      static_cast<double>(len));
    window_power += window[i] * window[i];
  }

  const std::size_t nfft = std::max(len, grid.size());
  RealFft fft(nfft);
  std::fill(fft.input(), fft.input() + nfft, 0.0);
  std::vector<double> acc(nfft / 2 + 1, 0.0);
  std::size_t segments = 0;
  for (std::size_t start = 0; start + len <= x.size(); start += hop) {
    for (std::size_t i = 0; i < len; ++i) fft.input()[i] = window[i] * x[start + i];
    fft.execute();
    for (std::size_t b = 0; b < acc.size(); ++b) acc[b] += fft.power(b);
    ++segments;
  }
  const double scale = 1.0 / (window_power * static_cast<double>(segments));

  const std::size_t n = grid.size();
  const std::size_t stride = nfft / n;
  SpectrumSamples s{grid, std::vector<double>(n)};
  for (std::size_t k = 0; k < n; ++k) {
    // omega_k = 2 pi (k - n/2) / n; the spectrum of a real sequence is even.
    const std::size_t offset = k >= n / 2 ? k - n / 2 : n / 2 - k;
    s.values[k] = acc[offset * stride] * scale;
  }
  return s;
}

EmpiricalRate empirical_directed_info(const TrajectorySet& traj, const WelchParams& params,
                                      const FrequencyGrid& grid) {
  EmpiricalRate out;
  SpectrumSamples sy = welch_psd(traj.y, params, grid);
  SpectrumSamples sw = welch_psd(traj.w, params, grid);
  for (auto* s : {&sy, &sw}) {
    for (double& v : s->values) {
      if (!(v > kPsdFloor)) {
        v = kPsdFloor;
        ++out.floored_bins;
      }
    }
  }
  out.rate = log_integral(sensitivity_ratio(sy, sw));
  return out;
}

ComparisonRecord compare_report(const SimulationConfig& cfg, const WelchParams& params,
                                double tolerance, const FrequencyGrid& grid) {
  if (!(tolerance >= 0.0)) throw InvalidInput("compare_report: tolerance must be >= 0");
  // Simulate first so a non-stabilizing loop surfaces as divergence.
  const TrajectorySet traj = simulate_loop(cfg);
  const EmpiricalRate emp = empirical_directed_info(traj, params, grid);
  const DecompositionReport analytic = decompose(RateInputs{cfg.model, grid});

  ComparisonRecord r;
  r.analytic_rate = analytic.total_rate;
  r.empirical_rate = emp.rate;
  r.abs_gap = std::abs(emp.rate - analytic.total_rate);
  if (analytic.total_rate != 0.0) r.rel_gap = r.abs_gap / std::abs(analytic.total_rate);
  r.tolerance = tolerance;
  r.pass = r.abs_gap <= tolerance;
  r.seed = cfg.seed;
  r.n_samples = cfg.n_samples;
  r.burn_in = cfg.burn_in;
  r.grid_points = grid.size();
  r.segment_length = params.segment_length;
  r.overlap_fraction = params.overlap_fraction;
  r.floored_bins = emp.floored_bins;
  return r;
}

void write_trajectory_csv(std::ostream& out, const TrajectorySet& traj) {
  out << "t,w,v,z,y,u\n" << std::setprecision(12);
  for (std::size_t t = 0; t < traj.y.size(); ++t) {
    out << t << ',' << traj.w[t] << ',' << traj.v[t] << ',' << traj.z[t] << ','
        << traj.y[t] << ',' << traj.u[t] << '\n';
  }
}

}  // namespace dirinfo
