#pragma once

#include <complex>
#include <cstdint>
#include <span>

#include "dirinfo/lti.hpp"

namespace dirinfo {

/// Controller K that places the closed-loop poles of the positive-feedback
/// loop 1 - G K exactly at the given z-domain locations.
///
/// G must be strictly proper of order n >= 1 with coprime numerator and
/// denominator; K has order n - 1 and exactly 2n - 1 poles must be given
/// (conjugate pairs together). Solves the Diophantine equation
/// den_G den_K - num_G num_K = prod(1 - p d). Throws InvalidInput.
TransferFunction place_poles(const TransferFunction& open_loop,
                             std::span<const std::complex<double>> closed_loop_poles);

/// A random stabilized loop: plant of order 1..3 with possibly unstable
/// poles, random stable feedback filter, pole-placement controller with all
/// closed-loop poles at magnitude <= 0.5, random white or colored noises.
/// Deterministic in the seed.
LoopModel random_stabilized_loop(std::uint64_t seed);

/// A random stable plant with unity feedback filter, white unit noises and
/// a stable static controller gain that keeps the loop stable.
LoopModel random_stable_plant_loop(std::uint64_t seed);

}  // namespace dirinfo
