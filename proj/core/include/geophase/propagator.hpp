#pragma once

#include <optional>

#include "geophase/hamiltonian.hpp"
#include "geophase/state.hpp"

namespace geophase {

/// Where H is sampled inside each step. `left_endpoint` is first order and
/// exists so the verification suite can demonstrate that it detects a
/// degraded stepper.
enum class StepRule { midpoint, left_endpoint };

struct PropagatorOptions {
  StepRule rule = StepRule::midpoint;
};

/// exp(-i H dt) for Hermitian H. Closed form via the Pauli decomposition for
/// d = 2, eigendecomposition otherwise.
Matrix unitary_step(const Matrix& h, double dt);

/// exp(-i H(t_mid) (t_to - t_from)) state.
ComplexState step(const HamiltonianSpec& spec, const ComplexState& state, double t_from,
                  double t_to, const PropagatorOptions& options = {});

Trajectory propagate(const HamiltonianSpec& spec, const ComplexState& initial,
                     const TimeGrid& grid, const PropagatorOptions& options = {});

/// Smallest N with (r dt)^2 <= 1e-9, clamped to [1000, 400000]. r is |H|,
/// raised to omega for the rotating model.
int default_steps(const HamiltonianSpec& spec, double duration);

inline constexpr double kDefaultCyclicTolerance = 1e-6;

struct CyclicityVerdict {
  bool is_cyclic = false;
  double overlap_magnitude = 0.0;
  /// arg <psi(0)|psi(T)>, set when is_cyclic.
  std::optional<double> total_phase;
  double tolerance = kDefaultCyclicTolerance;
};

CyclicityVerdict check_cyclic(const Trajectory& traj, double cyclic_tol = kDefaultCyclicTolerance);

}  // namespace geophase
