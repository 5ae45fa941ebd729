#include "geophase/wframe.hpp"

#include <cmath>
#include <string>

#include "geophase/error.hpp"
#include "geophase/phases.hpp"

namespace geophase {

namespace {


// Nearest matrix with orthonormal columns (polar factor) and the smallest
// singular value of the input.
std::pair<Matrix, double> polar_factor(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU() * svd.matrixV().adjoint(), svd.singularValues().minCoeff()};
}

Matrix unitary_power(const Eigen::ComplexSchur<Matrix>& schur, double s) {
  const Matrix& z = schur.matrixU();
  const auto diag = schur.matrixT().diagonal();
  Vector phases(diag.size());
  for (Index n = 0; n < diag.size(); ++n) phases[n] = std::polar(1.0, s * std::arg(diag[n]));
  return z * phases.asDiagonal() * z.adjoint();
}

}  // namespace

Matrix unitary_log(const Matrix& u) {
  Eigen::ComplexSchur<Matrix> schur(u);
  const Matrix& z = schur.matrixU();
  const auto diag = schur.matrixT().diagonal();
  Vector logs(diag.size());
  for (Index n = 0; n < diag.size(); ++n) logs[n] = Complex(0.0, std::arg(diag[n]));
  return z * logs.asDiagonal() * z.adjoint();
}

FrameTrajectory build_w_frame(const Trajectory& traj, const CyclicityVerdict& verdict,
                              const WFrameOptions& options) {
  if (!verdict.is_cyclic || !verdict.total_phase) {
    throw Error(ErrorCode::not_cyclic, "w-frame requires a cyclic trajectory");
  }
  const TimeGrid& g = traj.grid();
  const Index d = traj.dimension();
  const double phi = *verdict.total_phase;
  const double period = g.duration();

  std::vector<Vector> first;
  first.reserve(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double s = (g.node(k) - g.t_start()) / period;
    first.push_back(traj[k].amplitudes() * std::polar(1.0, -phi * s));
  }

  // Complement at t_0 from a Householder completion of [w_1 | 1].
  Matrix seed(d, d + 1);
  seed.col(0) = first.front();
  seed.rightCols(d) = Matrix::Identity(d, d);
  Eigen::HouseholderQR<Matrix> qr(seed);
  const Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  std::vector<Matrix> complement;
  complement.reserve(traj.size());
  complement.push_back(q.rightCols(d - 1));

  for (std::size_t k = 1; k < traj.size(); ++k) {
    const Vector& w = first[k];
    const Matrix& prev = complement.back();
    const Matrix projected = prev - w * (w.adjoint() * prev);
    auto [next, smallest] = polar_factor(projected);
    if (smallest < options.min_complement_overlap) {
      throw Error(ErrorCode::under_resolved,
                  "complement continuation broke down at node " + std::to_string(k) +
                      " (overlap " + std::to_string(smallest) + ")");
    }
    complement.push_back(std::move(next));
  }

  // Close the complement: C = Q_0^dagger Q_N, then Q_k <- Q_k C^{-s_k}.
  const Matrix closure = polar_factor(complement.front().adjoint() * complement.back()).first;
  const Eigen::ComplexSchur<Matrix> schur(closure);

  std::vector<Matrix> nodes;
  nodes.reserve(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double s = (g.node(k) - g.t_start()) / period;
    Matrix w(d, d);
    w.col(0) = first[k];
    w.rightCols(d - 1) = complement[k] * unitary_power(schur, -s);
    nodes.push_back(std::move(w));
  }
  return FrameTrajectory(g, std::move(nodes));
}

Matrix frame_connection(const FrameTrajectory& frame, std::size_t k) {
  const std::size_t last = frame.size() - 1;
  const double dt = frame.grid().dt();
  const Complex i{0.0, 1.0};
  const Matrix& w = frame[k];
  auto log_to = [&](std::size_t j) { return unitary_log(w.adjoint() * frame[j]); };

  // Endpoints use the one-sided second-order stencil; wrapping through the
  // closure node would amplify the periodicity defect by 1/dt.
  if (k > 0 && k < last) return (i / (2.0 * dt)) * (log_to(k + 1) - log_to(k - 1));
  if (last < 2) {
    return k == 0 ? Matrix((i / dt) * log_to(1)) : Matrix((-i / dt) * log_to(0));
  }
  if (k == 0) return (i / (2.0 * dt)) * (4.0 * log_to(1) - log_to(2));
  return (-i / (2.0 * dt)) * (4.0 * log_to(last - 1) - log_to(last - 2));
}

double EffectiveHamiltonianTrack::max_off_diagonal() const {
  double worst = 0.0;
  for (const auto& m : matrices) {
    for (Index r = 0; r < m.rows(); ++r) {
      for (Index c = 0; c < m.cols(); ++c) {
        if (r != c) worst = std::max(worst, std::abs(m(r, c)));
      }
    }
  }
  return worst;
}

double EffectiveHamiltonianTrack::hermiticity_defect() const {
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < matrices.size(); ++k) {
    worst = std::max(worst, geophase::hermiticity_defect(matrices[k]));
  }
  return worst;
}

std::vector<double> EffectiveHamiltonianTrack::diagonal(Index n) const {
  std::vector<double> out;
  out.reserve(matrices.size());
  for (const auto& m : matrices) out.push_back(m(n, n).real());
  return out;
}

EffectiveHamiltonianTrack effective_hamiltonian(const FrameTrajectory& frame,
                                                const HamiltonianSpec& spec) {
  if (frame.dimension() != spec.dimension()) {
    throw Error(ErrorCode::grid_mismatch, "frame and Hamiltonian dimensions differ");
  }
  EffectiveHamiltonianTrack track{frame.grid(), {}};
  track.matrices.reserve(frame.size());
  for (std::size_t k = 0; k < frame.size(); ++k) {
    const Matrix& w = frame[k];
    const Matrix h = evaluate(spec, frame.grid().node(k));
    track.matrices.push_back(w.adjoint() * h * w - frame_connection(frame, k));
  }
  return track;
}

Trajectory reconstruct_amplitude(const FrameTrajectory& frame, const HamiltonianSpec& spec) {
  if (frame.dimension() != spec.dimension()) {
    throw Error(ErrorCode::grid_mismatch, "frame and Hamiltonian dimensions differ");
  }
  const TimeGrid& g = frame.grid();
  const auto track = frame.track(0);
  auto energy = [&](std::size_t k) {
    const Vector& w = track[k].amplitudes();
    return w.dot(evaluate(spec, g.node(k)) * w).real();
  };

  std::vector<ComplexState> states;
  states.reserve(track.size());
  states.push_back(track.front());
  double dynamical = 0.0;
  double overlap_phases = 0.0;
  double e_prev = energy(0);
  for (std::size_t k = 1; k < track.size(); ++k) {
    const double e = energy(k);
    dynamical += 0.5 * (e_prev + e) * g.dt();
    e_prev = e;
    const Complex ov = inner_product(track[k - 1], track[k]);
    if (std::abs(ov) < kMinConsecutiveOverlap) {
      throw Error(ErrorCode::under_resolved,
                  "under-resolved frame track at node " + std::to_string(k - 1));
    }
    overlap_phases += std::arg(ov);
    states.push_back(track[k].rephased(-(dynamical + overlap_phases)));
  }
  return Trajectory(g, std::move(states), spec.id());
}

double frame_holonomy(const FrameTrajectory& frame, Index track) {
  if (track < 0 || track >= frame.dimension()) {
    throw Error(ErrorCode::invalid_argument, "frame track index out of range");
  }
  return wrap_phase(connection_integral(frame.track(track)));
}

}  // namespace geophase
