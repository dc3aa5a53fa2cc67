#pragma once

#include <complex>
#include <vector>

#include "dirinfo/noise_spec.hpp"
#include "dirinfo/transfer_function.hpp"

namespace dirinfo {

/// The feedback interconnection
///
///     p = P u,   z = H (p + v),   y = z + w,   u = K y
///
/// with positive-feedback sign, so the return difference is 1 - L for the
/// loop gain L = P K H. Standard negative feedback is modelled by negating K.
struct LoopModel {
  TransferFunction plant;
  TransferFunction controller;
  TransferFunction feedback_filter;
  NoiseSpec channel_noise = NoiseSpec::white(1.0);
  NoiseSpec output_disturbance = NoiseSpec::white(1.0);
  /// Initial state of the plant realization; empty means all-zero.
  std::vector<double> initial_state;

  TransferFunction loop_gain() const { return plant * controller * feedback_filter; }

  /// Checks noise specs, the initial-state length and strict properness of
  /// the loop gain. Throws InvalidInput.
  void validate() const;

  LoopModel with_controller(TransferFunction k) const {
    LoopModel m = *this;
    m.controller = std::move(k);
    return m;
  }

  friend bool operator==(const LoopModel&, const LoopModel&) = default;
};

/// Closed-loop maps of a LoopModel.
struct ClosedLoop {
  TransferFunction f_wy;         ///< channel noise -> y, 1/(1 - L)
  TransferFunction f_vy;         ///< output disturbance -> y, H/(1 - L)
  TransferFunction sensitivity;  ///< 1/(1 - L)
  TransferFunction loop_gain;    ///< L = P K H, reduced
  /// Numerator of 1 - L in reduced form (d-domain, constant term 1).
  Polynomial char_poly;
  /// Every mode of the interconnection: roots of the unreduced return
  /// difference numerator, padded with origin poles up to the total
  /// realization order of P, K and H. Includes modes hidden by cancellation.
  std::vector<std::complex<double>> closed_loop_poles;
  /// Unstable roots shared by the unreduced numerator and denominator of L.
  std::vector<std::complex<double>> unstable_cancellations;
  bool is_stable = false;
};

/// Builds the closed-loop maps. Throws InvalidInput if the model is invalid
/// and DegenerateLoop if 1 - L vanishes identically.
ClosedLoop close_loop(const LoopModel& model);

struct StabilityReport {
  bool stabilizing = false;
  std::vector<std::complex<double>> poles;
  std::vector<std::complex<double>> offending_poles;
  std::vector<std::complex<double>> unstable_cancellations;
};

/// True iff every closed-loop mode lies strictly inside the unit circle and
/// no unstable pole/zero cancellation occurs between P, K and H.
StabilityReport is_stabilizing(const LoopModel& model);

}  // namespace dirinfo
