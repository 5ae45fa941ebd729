#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace geophase {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

/// Tolerance used when a ComplexState is built from an already-unitary image.
inline constexpr double kUnitNormTolerance = 1e-10;
/// Below this magnitude an overlap carries no usable relative phase.
inline constexpr double kMinOverlapMagnitude = 1e-12;

/// Unit-norm state vector of dimension d >= 2.
class ComplexState {
 public:
  /// Normalizes `amplitudes`. Throws on d < 2 or a zero vector.
  explicit ComplexState(Vector amplitudes);
  ComplexState(std::initializer_list<Complex> amplitudes);

  /// Wraps the output of a unitary map without renormalizing, so norm drift
  /// stays observable. Throws if the norm is off by more than
  /// kUnitNormTolerance.
  static ComplexState from_unitary_image(Vector amplitudes);

  Index dimension() const noexcept { return amplitudes_.size(); }
  const Vector& amplitudes() const noexcept { return amplitudes_; }
  Complex operator[](Index k) const { return amplitudes_[k]; }
  double norm() const { return amplitudes_.norm(); }

  /// e^{i phase} * this, without renormalization.
  ComplexState rephased(double phase) const;

  /// Outer product |s><s|.
  Matrix projector() const;

 private:
  struct Trusted {};
  ComplexState(Vector amplitudes, Trusted) noexcept
      : amplitudes_(std::move(amplitudes)) {}

  Vector amplitudes_;
};

/// Uniform partition of [t_start, t_end] into `steps` intervals.
class TimeGrid {
 public:
  TimeGrid(double t_start, double t_end, int steps);

  double t_start() const noexcept { return t_start_; }
  double t_end() const noexcept { return t_end_; }
  int steps() const noexcept { return steps_; }
  /// Number of nodes, steps + 1.
  std::size_t size() const noexcept { return static_cast<std::size_t>(steps_) + 1; }
  double dt() const noexcept { return (t_end_ - t_start_) / steps_; }
  double duration() const noexcept { return t_end_ - t_start_; }
  double node(std::size_t k) const noexcept;

  bool operator==(const TimeGrid&) const = default;

 private:
  double t_start_;
  double t_end_;
  int steps_;
};

/// One ComplexState per grid node.
class Trajectory {
 public:
  Trajectory(TimeGrid grid, std::vector<ComplexState> states,
             std::optional<std::string> spec_id = std::nullopt);

  const TimeGrid& grid() const noexcept { return grid_; }
  const std::vector<ComplexState>& states() const noexcept { return states_; }
  const ComplexState& operator[](std::size_t k) const { return states_[k]; }
  const ComplexState& front() const { return states_.front(); }
  const ComplexState& back() const { return states_.back(); }
  std::size_t size() const noexcept { return states_.size(); }
  Index dimension() const { return states_.front().dimension(); }
  const std::optional<std::string>& spec_id() const noexcept { return spec_id_; }

 private:
  TimeGrid grid_;
  std::vector<ComplexState> states_;
  std::optional<std::string> spec_id_;
};

/// d orthonormal vectors per grid node, stored as the columns of a unitary
/// matrix: column n of node k is w_n(t_k).
class FrameTrajectory {
 public:
  FrameTrajectory(TimeGrid grid, std::vector<Matrix> nodes);

  const TimeGrid& grid() const noexcept { return grid_; }
  const std::vector<Matrix>& nodes() const noexcept { return nodes_; }
  const Matrix& operator[](std::size_t k) const { return nodes_[k]; }
  std::size_t size() const noexcept { return nodes_.size(); }
  Index dimension() const { return nodes_.front().rows(); }

  ComplexState vector(std::size_t k, Index n) const;
  /// Column n over all nodes.
  std::vector<ComplexState> track(Index n) const;

  /// max_n,j |w_n(t_end) - w_n(t_start)|.
  double periodicity_defect() const;
  /// max_k max_ij |W_k^dagger W_k - 1|.
  double orthonormality_defect() const;

 private:
  TimeGrid grid_;
  std::vector<Matrix> nodes_;
};

/// <a|b> = sum_k conj(a_k) b_k.
Complex inner_product(const ComplexState& a, const ComplexState& b);

/// (<sigma_x>, <sigma_y>, <sigma_z>) of a spin-1/2 state.
std::array<double, 3> bloch_vector(const ComplexState& s);

/// arg <a|b> in (-pi, pi]. Throws when |<a|b>| <= kMinOverlapMagnitude.
double arg_overlap(const ComplexState& a, const ComplexState& b);

/// Principal value in (-pi, pi].
double wrap_phase(double phase) noexcept;

/// The Pauli matrices sigma_x, sigma_y, sigma_z.
const std::array<Eigen::Matrix2cd, 3>& pauli();

}  // namespace geophase
