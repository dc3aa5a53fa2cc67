#include "dirinfo/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "dirinfo/errors.hpp"

namespace dirinfo {

namespace {

constexpr double kPi = std::numbers::pi;

void require_same_grid(const SpectrumSamples& a, const SpectrumSamples& b,
                       const char* op) {
  if (!(a.grid == b.grid) || a.values.size() != b.values.size()) {
    throw InvalidInput(std::string(op) + ": spectra are sampled on different grids");
  }
}

double checked_log(double value, double omega) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << "log integral: nonpositive or non-finite spectrum value " << value
        << " at omega = " << omega;
    throw LogDomainError(msg.str(), omega, value);
  }
  return std::log(value);
}

void reject_unit_circle_roots(const std::vector<std::complex<double>>& roots,
                              const char* what) {
  for (const auto& r : roots) {
    if (std::abs(std::abs(r) - 1.0) <= 1e-9) {
      std::ostringstream msg;
      msg << "noise_psd: shaping filter " << what << " on the unit circle at " << r;
      throw SingularityError(msg.str(), std::abs(std::arg(r)));
    }
  }
}

}  // namespace

FrequencyGrid::FrequencyGrid(std::size_t n_points) : n_(n_points) {
  if (n_ < 64 || (n_ & (n_ - 1)) != 0) {
    throw InvalidInput("frequency grid: n_points must be a power of two >= 64");
  }
}

double FrequencyGrid::spacing() const noexcept {
  return 2.0 * kPi / static_cast<double>(n_);
}

double FrequencyGrid::omega(std::size_t k) const noexcept {
  return -kPi + spacing() * static_cast<double>(k);
}

std::vector<double> FrequencyGrid::omegas() const {
  std::vector<double> w(n_);
  for (std::size_t k = 0; k < n_; ++k) w[k] = omega(k);
  return w;
}

void SpectrumSamples::validate() const {
  const std::size_t n = grid.size();
  if (values.size() != n) throw InvalidInput("spectrum: one value per grid point required");
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw InvalidInput("spectrum: values must be finite and nonnegative");
    }
  }
  for (std::size_t k = 1; k < n / 2; ++k) {
    const double a = values[k];
    const double b = values[n - k];
    if (std::abs(a - b) > 1e-9 * std::max(std::abs(a), std::abs(b))) {
      throw InvalidInput("spectrum: values are not even in omega");
    }
  }
}

SpectrumSamples sample_spectrum(const SpectrumFn& fn, const FrequencyGrid& grid) {
  SpectrumSamples s{grid, std::vector<double>(grid.size())};
  for (std::size_t k = 0; k < grid.size(); ++k) s.values[k] = fn(grid.omega(k));
  return s;
}

SpectrumSamples noise_psd(const NoiseSpec& spec, const FrequencyGrid& grid) {
  if (spec.kind == NoiseKind::colored && spec.shaping) {
    reject_unit_circle_roots(spec.shaping->poles(), "pole");
    reject_unit_circle_roots(spec.shaping->zeros(), "zero");
  }
  spec.validate();
  return sample_spectrum([&](double w) { return spec.psd_at(w); }, grid);
}

SpectrumSamples output_psd(const ClosedLoop& cl, const SpectrumSamples& sw,
                           const SpectrumSamples& sv) {
  require_same_grid(sw, sv, "output_psd");
  SpectrumSamples sy{sw.grid, std::vector<double>(sw.values.size())};
  for (std::size_t k = 0; k < sy.values.size(); ++k) {
    const double w = sw.grid.omega(k);
    sy.values[k] = std::norm(freq_response(cl.f_wy, w)) * sw.values[k] +
                   std::norm(freq_response(cl.f_vy, w)) * sv.values[k];
  }
  return sy;
}

SpectrumSamples sensitivity_ratio(const SpectrumSamples& sa, const SpectrumSamples& sb) {
  require_same_grid(sa, sb, "sensitivity_ratio");
  SpectrumSamples r{sa.grid, std::vector<double>(sa.values.size())};
  for (std::size_t k = 0; k < r.values.size(); ++k) {
    if (!(sb.values[k] > 1e-300)) {
      const double w = sa.grid.omega(k);
      std::ostringstream msg;
      msg << "sensitivity_ratio: reference spectrum vanishes at omega = " << w;
      throw DivisionDomainError(msg.str(), w);
    }
    r.values[k] = std::sqrt(sa.values[k] / sb.values[k]);
  }
  return r;
}

double periodic_mean(const std::vector<double>& samples) {
  // Neumaier summation; fixed order keeps results reproducible.
  double sum = 0.0;
  double comp = 0.0;
  for (double x : samples) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  return (sum + comp) / static_cast<double>(samples.size());
}

double log_integral(const SpectrumSamples& s) {
  std::vector<double> logs(s.values.size());
  for (std::size_t k = 0; k < logs.size(); ++k) {
    logs[k] = checked_log(s.values[k], s.grid.omega(k));
  }
  return periodic_mean(logs);
}

LogIntegral integrate_log(const SpectrumFn& fn, const FrequencyGrid& grid) {
  auto below_floor = [](const SpectrumSamples& s) -> std::ptrdiff_t {
    for (std::size_t k = 0; k < s.values.size(); ++k) {
      if (s.values[k] < kNearSingularFloor) return static_cast<std::ptrdiff_t>(k);
    }
    return -1;
  };

  LogIntegral out;
  FrequencyGrid g = grid;
  SpectrumSamples s = sample_spectrum(fn, g);
  for (std::size_t k = 0; k < s.values.size(); ++k) checked_log(s.values[k], g.omega(k));
  if (below_floor(s) >= 0) {
    out.refined = true;
    g = g.refined(4);
    s = sample_spectrum(fn, g);
    const std::ptrdiff_t bad = below_floor(s);
    if (bad >= 0) {
      const double w = g.omega(static_cast<std::size_t>(bad));
      std::ostringstream msg;
      msg << "log integral: spectrum value " << s.values[static_cast<std::size_t>(bad)]
          << " below " << kNearSingularFloor << " at omega = " << w
          << " after grid refinement";
      throw NearSingularError(msg.str(), w);
    }
  }
  LogIntegral fixed = integrate_log_fixed(fn, g);
  fixed.refined = out.refined;
  return fixed;
}

LogIntegral integrate_log_fixed(const SpectrumFn& fn, const FrequencyGrid& grid) {
  LogIntegral out;
  out.value = log_integral(sample_spectrum(fn, grid));
  out.grid_points = grid.size();

  const double half = 0.5 * grid.spacing();
  std::vector<double> mid(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double w = grid.omega(k) + half;
    mid[k] = checked_log(fn(w), w);
  }
  out.convergence_estimate = 0.5 * std::abs(periodic_mean(mid) - out.value);
  return out;
}

void write_spectrum_csv(std::ostream& out, const SpectrumSamples& s) {
  out << "omega,value\n" << std::setprecision(12);
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    out << s.grid.omega(k) << ',' << s.values[k] << '\n';
  }
}

}  // namespace dirinfo
