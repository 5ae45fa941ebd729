#include "geophase/state.hpp"

#include <cmath>
#include <numbers>

#include "geophase/error.hpp"

namespace geophase {

namespace {

void require_same_dimension(const ComplexState& a, const ComplexState& b) {
  if (a.dimension() != b.dimension()) {
    throw Error(ErrorCode::dimension_mismatch,
                "incompatible states: dimension " + std::to_string(a.dimension()) +
                    " vs " + std::to_string(b.dimension()));
  }
}

}  // namespace

ComplexState::ComplexState(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() < 2) {
    throw Error(ErrorCode::invalid_argument, "state dimension must be at least 2");
  }
  const double n = amplitudes_.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorCode::invalid_argument, "cannot normalize a zero or non-finite vector");
  }
  amplitudes_ /= n;
}

ComplexState::ComplexState(std::initializer_list<Complex> amplitudes)
    : ComplexState(Vector(Eigen::Map<const Vector>(amplitudes.begin(),
                                                   static_cast<Index>(amplitudes.size())))) {}

ComplexState ComplexState::from_unitary_image(Vector amplitudes) {
  if (amplitudes.size() < 2) {
    throw Error(ErrorCode::invalid_argument, "state dimension must be at least 2");
  }
  const double n = amplitudes.norm();
  if (!(std::abs(n - 1.0) <= kUnitNormTolerance)) {
    throw Error(ErrorCode::invalid_argument,
                "vector is not unit norm (norm = " + std::to_string(n) + ")");
  }
  return ComplexState(std::move(amplitudes), Trusted{});
}

ComplexState ComplexState::rephased(double phase) const {
  return ComplexState(Vector(amplitudes_ * std::polar(1.0, phase)), Trusted{});
}

Matrix ComplexState::projector() const { return amplitudes_ * amplitudes_.adjoint(); }

TimeGrid::TimeGrid(double t_start, double t_end, int steps)
    : t_start_(t_start), t_end_(t_end), steps_(steps) {
  if (!(t_end > t_start) || !std::isfinite(t_start) || !std::isfinite(t_end)) {
    throw Error(ErrorCode::invalid_argument, "time grid requires t_end > t_start");
  }
  if (steps < 2) {
    throw Error(ErrorCode::invalid_argument, "time grid requires at least 2 steps");
  }
}

double TimeGrid::node(std::size_t k) const noexcept {
  if (k == static_cast<std::size_t>(steps_)) return t_end_;
  return t_start_ + static_cast<double>(k) * (t_end_ - t_start_) / steps_;
}

Trajectory::Trajectory(TimeGrid grid, std::vector<ComplexState> states,
                       std::optional<std::string> spec_id)
    : grid_(grid), states_(std::move(states)), spec_id_(std::move(spec_id)) {
  if (states_.size() != grid_.size()) {
    throw Error(ErrorCode::grid_mismatch,
                "trajectory has " + std::to_string(states_.size()) + " states for " +
                    std::to_string(grid_.size()) + " grid nodes");
  }
  for (const auto& s : states_) {
    if (s.dimension() != states_.front().dimension()) {
      throw Error(ErrorCode::dimension_mismatch, "trajectory states differ in dimension");
    }
  }
}

FrameTrajectory::FrameTrajectory(TimeGrid grid, std::vector<Matrix> nodes)
    : grid_(grid), nodes_(std::move(nodes)) {
  if (nodes_.size() != grid_.size()) {
    throw Error(ErrorCode::grid_mismatch,
                "frame has " + std::to_string(nodes_.size()) + " nodes for " +
                    std::to_string(grid_.size()) + " grid nodes");
  }
  const Index d = nodes_.front().rows();
  for (const auto& w : nodes_) {
    if (w.rows() != d || w.cols() != d || d < 2) {
      throw Error(ErrorCode::dimension_mismatch, "frame nodes must be square d x d, d >= 2");
    }
  }
  if (orthonormality_defect() > 1e-10) {
    throw Error(ErrorCode::invalid_argument, "frame vectors are not orthonormal");
  }
}

ComplexState FrameTrajectory::vector(std::size_t k, Index n) const {
  return ComplexState::from_unitary_image(nodes_[k].col(n));
}

std::vector<ComplexState> FrameTrajectory::track(Index n) const {
  std::vector<ComplexState> out;
  out.reserve(nodes_.size());
  for (std::size_t k = 0; k < nodes_.size(); ++k) out.push_back(vector(k, n));
  return out;
}

double FrameTrajectory::periodicity_defect() const {
  return (nodes_.back() - nodes_.front()).cwiseAbs().maxCoeff();
}

double FrameTrajectory::orthonormality_defect() const {
  double worst = 0.0;
  for (const auto& w : nodes_) {
    const Matrix g = w.adjoint() * w - Matrix::Identity(w.cols(), w.cols());
    worst = std::max(worst, g.cwiseAbs().maxCoeff());
  }
  return worst;
}

Complex inner_product(const ComplexState& a, const ComplexState& b) {
  require_same_dimension(a, b);
  return a.amplitudes().dot(b.amplitudes());
}

std::array<double, 3> bloch_vector(const ComplexState& s) {
  if (s.dimension() != 2) {
    throw Error(ErrorCode::spin_half_only, "bloch_vector is defined for spin-1/2 (d = 2) only");
  }
  const Complex a = s[0];
  const Complex b = s[1];
  const Complex cross = std::conj(a) * b;
  return {2.0 * cross.real(), 2.0 * cross.imag(), std::norm(a) - std::norm(b)};
}

double arg_overlap(const ComplexState& a, const ComplexState& b) {
  const Complex ov = inner_product(a, b);
  if (!(std::abs(ov) > kMinOverlapMagnitude)) {
    throw Error(ErrorCode::undefined_phase, "relative phase undefined for near-orthogonal states");
  }
  return std::arg(ov);
}

double wrap_phase(double phase) noexcept {
  double r = std::remainder(phase, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

const std::array<Eigen::Matrix2cd, 3>& pauli() {
  static const std::array<Eigen::Matrix2cd, 3> sigma = [] {
    const Complex i{0.0, 1.0};
    std::array<Eigen::Matrix2cd, 3> s;
    s[0] << 0.0, 1.0, 1.0, 0.0;
    s[1] << 0.0, -i, i, 0.0;
    s[2] << 1.0, 0.0, 0.0, -1.0;
    return s;
  }();
  return sigma;
}

}  // namespace geophase
