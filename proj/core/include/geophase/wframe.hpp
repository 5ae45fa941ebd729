#pragma once

#include <vector>

#include "geophase/hamiltonian.hpp"
#include "geophase/propagator.hpp"
#include "geophase/state.hpp"

namespace geophase {

struct WFrameOptions {
  /// Smallest singular value of the projected complement allowed between
  /// consecutive nodes before the frame is declared under-resolved.
  double min_complement_overlap = 0.5;
};

/// Periodic moving frame whose first column is the periodic representative
/// e^{-i phi (t - t_0)/T} psi(t) of a cyclic trajectory. The remaining
/// columns span its orthogonal complement: seeded from a Householder
/// completion at t_0, continued node to node by the polar factor of the
/// projected previous complement, and closed by spreading the endpoint
/// mismatch C as C^{-s}, s = (t - t_0)/T.
FrameTrajectory build_w_frame(const Trajectory& traj, const CyclicityVerdict& verdict,
                              const WFrameOptions& options = {});

/// <w_n|H|w_m> - <w_n|i d/dt w_m> at every node.
struct EffectiveHamiltonianTrack {
  TimeGrid grid;
  std::vector<Matrix> matrices;

  double max_off_diagonal() const;
  /// max over interior nodes of max_ij |H_eff - H_eff^dagger|.
  double hermiticity_defect() const;
  /// H_eff_nn(t_k) over all nodes.
  std::vector<double> diagonal(Index n) const;
};

/// Frame connection A_nm = <w_n|i d/dt w_m> at node k, from the matrix
/// logarithms of the forward and backward overlap matrices
/// (i / 2dt) [log(W_k^dagger W_{k+1}) - log(W_k^dagger W_{k-1})]. Endpoints
/// use the one-sided second-order stencil.
Matrix frame_connection(const FrameTrajectory& frame, std::size_t k);

EffectiveHamiltonianTrack effective_hamiltonian(const FrameTrajectory& frame,
                                                const HamiltonianSpec& spec);

/// psi(t) = w_1(t) exp(-i int [<w_1|H|w_1> - <w_1|i d/dt w_1>] dt), using the
/// trapezoid rule for <H> and the overlap-phase sum for the connection.
Trajectory reconstruct_amplitude(const FrameTrajectory& frame, const HamiltonianSpec& spec);

/// Wrapped connection integral of column `track` (0-based).
double frame_holonomy(const FrameTrajectory& frame, Index track);

/// Principal logarithm of a unitary matrix (anti-Hermitian result).
Matrix unitary_log(const Matrix& u);

}  // namespace geophase
