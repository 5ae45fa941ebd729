#pragma once

#include <optional>

namespace geophase {

/// Phases of one cyclic evolution. All values in radians with hbar = 1 and
/// the sign convention total = aa - dynamical.
struct PhaseReport {
  /// Principal value in (-pi, pi].
  double total_phase = 0.0;
  /// Integral of <psi|H|psi> over one period, unwrapped.
  double dynamical = 0.0;
  /// Principal value in (-pi, pi].
  double aa_phase = 0.0;
  std::optional<double> aa_phase_unwrapped;
  std::optional<double> berry_phase;
  std::optional<double> berry_phase_unwrapped;
  /// |wrap(total - aa + dynamical)|.
  double decomposition_residual = 0.0;
  /// Signed solid angle swept by the polarization vector (spin-1/2 oracles).
  std::optional<double> solid_angle;
  std::optional<double> period;
};

}  // namespace geophase
