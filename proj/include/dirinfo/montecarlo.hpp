#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "dirinfo/lti.hpp"
#include "dirinfo/spectral.hpp"

namespace dirinfo {

struct SimulationConfig {
  LoopModel model;
  /// Retained samples, after burn-in.
  std::size_t n_samples = std::size_t{1} << 17;
  /// Samples simulated first and discarded.
  std::size_t burn_in = 4096;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Sample paths of the loop signals after burn-in. y[t] == z[t] + w[t]
/// exactly at every t.
struct TrajectorySet {
  std::vector<double> y, w, v, z, u;
  std::uint64_t seed = 0;
  std::size_t sample_count = 0;
};

enum class WindowKind { hann };

struct WelchParams {
  std::size_t segment_length = 1024;
  double overlap_fraction = 0.5;
  WindowKind window = WindowKind::hann;

  void validate() const;
};

/// Transposed direct-form II realization of a TransferFunction.
class LtiFilter {
 public:
  explicit LtiFilter(const TransferFunction& tf, std::span<const double> initial_state = {});

  double feedthrough() const noexcept { return b_[0]; }
  /// Output at the current step when the current input is zero.
  double pending() const noexcept { return state_.empty() ? 0.0 : state_[0]; }
  double step(double x) noexcept;

 private:
  std::vector<double> b_;
  std::vector<double> a_;
  std::vector<double> state_;
};

/// Simulates the loop sample by sample with Gaussian innovations drawn from
/// seed-derived streams. Deterministic in cfg. Throws DivergenceError once a
/// signal exceeds 1e12 in magnitude.
TrajectorySet simulate_loop(const SimulationConfig& cfg);

/// Averaged Hann-windowed periodograms, scaled so a white sequence of
/// variance s2 has flat PSD s2, sampled on grid (zero-padded or decimated).
SpectrumSamples welch_psd(std::span<const double> x, const WelchParams& params,
                          const FrequencyGrid& grid = FrequencyGrid{});

struct EmpiricalRate {
  double rate = 0.0;
  /// PSD bins raised to the 1e-12 floor.
  std::size_t floored_bins = 0;
};

/// Plug-in estimate of I(Z -> Y) from Welch spectra of y and w.
EmpiricalRate empirical_directed_info(const TrajectorySet& traj, const WelchParams& params,
                                      const FrequencyGrid& grid = FrequencyGrid{});

inline constexpr double kDefaultComparisonTolerance = 0.03;

struct ComparisonRecord {
  double analytic_rate = 0.0;
  double empirical_rate = 0.0;
  double abs_gap = 0.0;
  /// abs_gap / |analytic_rate|; absent when the analytic rate is zero.
  std::optional<double> rel_gap;
  double tolerance = kDefaultComparisonTolerance;
  bool pass = false;
  std::uint64_t seed = 0;
  std::size_t n_samples = 0;
  std::size_t burn_in = 0;
  std::size_t grid_points = 0;
  std::size_t segment_length = 0;
  double overlap_fraction = 0.0;
  std::size_t floored_bins = 0;
};

/// Analytic decomposition versus the simulated plug-in estimate. PASS iff
/// abs_gap <= tolerance.
ComparisonRecord compare_report(const SimulationConfig& cfg, const WelchParams& params,
                                double tolerance = kDefaultComparisonTolerance,
                                const FrequencyGrid& grid = FrequencyGrid{});

/// CSV with header "t,w,v,z,y,u".
void write_trajectory_csv(std::ostream& out, const TrajectorySet& traj);

}  // namespace dirinfo
