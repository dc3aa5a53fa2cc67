#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include "dirinfo/lti.hpp"
#include "dirinfo/noise_spec.hpp"

namespace dirinfo {

/// Uniform samples of [-pi, pi) at spacing 2 pi / n, n a power of two >= 64.
class FrequencyGrid {
 public:
  static constexpr std::size_t kDefaultPoints = 4096;

  explicit FrequencyGrid(std::size_t n_points = kDefaultPoints);

  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept;
  double omega(std::size_t k) const noexcept;
  std::vector<double> omegas() const;
  /// Grid with factor times as many points; factor must be a power of two.
  FrequencyGrid refined(std::size_t factor) const { return FrequencyGrid(n_ * factor); }

  friend bool operator==(const FrequencyGrid&, const FrequencyGrid&) = default;

 private:
  std::size_t n_;
};

/// PSD values sampled on a FrequencyGrid.
struct SpectrumSamples {
  FrequencyGrid grid;
  std::vector<double> values;

  /// Nonnegative finite values, one per grid point, even in omega to 1e-9
  /// relative. Throws InvalidInput.
  void validate() const;
};

using SpectrumFn = std::function<double(double omega)>;

SpectrumSamples sample_spectrum(const SpectrumFn& fn, const FrequencyGrid& grid);

/// White: constant variance. Colored: variance * |G|^2. Throws
/// SingularityError if the shaping filter has a pole or zero on the unit
/// circle.
SpectrumSamples noise_psd(const NoiseSpec& spec, const FrequencyGrid& grid);

/// S_Y = |F_wy|^2 S_W + |F_vy|^2 S_V pointwise.
SpectrumSamples output_psd(const ClosedLoop& cl, const SpectrumSamples& sw,
                           const SpectrumSamples& sv);

/// sqrt(S_a / S_b) pointwise. Throws DivisionDomainError when S_b <= 1e-300.
SpectrumSamples sensitivity_ratio(const SpectrumSamples& sa, const SpectrumSamples& sb);

/// (1/2pi) int log s(w) dw by the periodic trapezoid rule, summed left to
/// right in ascending omega. Throws LogDomainError on a nonpositive sample.
double log_integral(const SpectrumSamples& s);

/// Mean of f over the grid, i.e. the periodic trapezoid rule for
/// (1/2pi) int f(w) dw. Compensated summation in ascending omega.
double periodic_mean(const std::vector<double>& samples);

/// A log-spectral integral with its accuracy estimate.
struct LogIntegral {
  double value = 0.0;
  /// |I(2n) - I(n)|, from the midpoints of the final grid.
  double convergence_estimate = 0.0;
  std::size_t grid_points = 0;
  /// Set when samples fell below the near-singular floor and the grid was
  /// refined.
  bool refined = false;
};

/// Samples below this trigger refinement, then NearSingularError.
inline constexpr double kNearSingularFloor = 1e-12;

/// log_integral of fn on exactly this grid, plus the midpoint-based
/// convergence estimate. No refinement.
LogIntegral integrate_log_fixed(const SpectrumFn& fn, const FrequencyGrid& grid);

/// log_integral over a spectrum given as a function. Samples below
/// kNearSingularFloor refine the grid by 4 once; if they persist,
/// NearSingularError. Nonpositive samples raise LogDomainError.
LogIntegral integrate_log(const SpectrumFn& fn, const FrequencyGrid& grid);

/// CSV with header "omega,value", one row per grid point.
void write_spectrum_csv(std::ostream& out, const SpectrumSamples& s);

}  // namespace dirinfo
