#pragma once

#include <optional>

#include "dirinfo/transfer_function.hpp"

namespace dirinfo {

enum class NoiseKind { white, colored };

/// PSD model of a stationary Gaussian source.
///
/// White: S(w) = variance. Colored: S(w) = variance * |G(e^{jw})|^2 for a
/// stable shaping filter G driven by white noise of the given variance.
/// A zero variance describes an absent source.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::white;
  double variance = 1.0;
  std::optional<TransferFunction> shaping;

  static NoiseSpec white(double variance) { return {NoiseKind::white, variance, std::nullopt}; }
  static NoiseSpec colored(double variance, TransferFunction shaping) {
    return {NoiseKind::colored, variance, std::move(shaping)};
  }

  /// Throws InvalidInput unless the invariants above hold.
  void validate() const;

  /// Filter mapping the unit-variance driving noise to the source, up to
  /// the sqrt(variance) scale: unity for white noise.
  TransferFunction filter() const {
    return kind == NoiseKind::colored ? *shaping : TransferFunction{};
  }

  /// Spectral density at a single frequency.
  double psd_at(double omega) const;

  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

}  // namespace dirinfo
