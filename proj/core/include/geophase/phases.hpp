#pragma once

#include <span>

#include "geophase/hamiltonian.hpp"
#include "geophase/phase_report.hpp"
#include "geophase/propagator.hpp"
#include "geophase/state.hpp"

namespace geophase {

/// Consecutive overlaps below this magnitude mean the grid does not resolve
/// the motion of the state.
inline constexpr double kMinConsecutiveOverlap = 0.5;

/// Sum of arg <u_k|u_{k+1}> over the track. Throws under_resolved when a
/// consecutive overlap is smaller than kMinConsecutiveOverlap.
double overlap_phase_sum(std::span<const ComplexState> track);

/// Discrete integral of <u|i d/dt u> along the track: -sum arg <u_k|u_{k+1}>.
double connection_integral(std::span<const ComplexState> track);

/// Trapezoid rule for the integral of <psi|H|psi> over the trajectory grid.
double dynamical_phase(const Trajectory& traj, const HamiltonianSpec& spec);

/// Aharonov-Anandan phase in the overlap-product form,
/// wrap(total_phase - sum arg <psi_k|psi_{k+1}>). Unchanged by any per-node
/// rephasing of the trajectory. Throws not_cyclic unless verdict.is_cyclic.
double aa_phase(const Trajectory& traj, const CyclicityVerdict& verdict);

/// Unwrapped summed form of aa_phase (total_phase taken as a principal value).
double aa_phase_summed(const Trajectory& traj, const CyclicityVerdict& verdict);

/// -arg of prod_k <v_n(t_k)|v_n(t_{k+1})> closed by <v_n(t_N)|v_n(t_0)>.
/// Throws open_loop if H(t_end) != H(t_start).
double berry_phase(const EigenFrame& frame, Index track);

/// Assembles total, dynamical, AA and (when the parameter loop closes) Berry
/// phases. The Berry track is the eigenvector with the largest overlap with
/// the initial state.
PhaseReport phase_report(const Trajectory& traj, const HamiltonianSpec& spec,
                         double cyclic_tol = kDefaultCyclicTolerance);

/// <psi_bar(0)|psi_bar(t_k)> for the parallel-transported lift of the
/// trajectory. For a cyclic trajectory at k = N its argument is the AA phase.
Complex pancharatnam_overlap(const Trajectory& traj, std::size_t k);

}  // namespace geophase
