#include "geophase/propagator.hpp"

#include <cmath>
#include <sstream>

#include "geophase/error.hpp"

namespace geophase {

namespace {

Eigen::Matrix2cd pauli_exponential(const Matrix& h, double dt) {
  // h = a0 + ax sx + ay sy + az sz
  const double a0 = 0.5 * (h(0, 0).real() + h(1, 1).real());
  const double ax = 0.5 * (h(0, 1).real() + h(1, 0).real());
  const double ay = 0.5 * (h(1, 0).imag() - h(0, 1).imag());
  const double az = 0.5 * (h(0, 0).real() - h(1, 1).real());
  const double a = std::sqrt(ax * ax + ay * ay + az * az);
  const double angle = a * dt;
  const double c = std::cos(angle);
  const double sinc = a > 0.0 ? std::sin(angle) / a : dt;
  const Complex i{0.0, 1.0};
  Eigen::Matrix2cd u;
  u(0, 0) = c - i * sinc * az;
  u(0, 1) = -i * sinc * Complex(ax, -ay);
  u(1, 0) = -i * sinc * Complex(ax, ay);
  u(1, 1) = c + i * sinc * az;
  return std::polar(1.0, -a0 * dt) * u;
}

}  // namespace

Matrix unitary_step(const Matrix& h, double dt) {
  if (h.rows() == 2) return Matrix(pauli_exponential(h, dt));
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Eigen::VectorXd& e = es.eigenvalues();
  Vector phases(e.size());
  for (Index n = 0; n < e.size(); ++n) phases[n] = std::polar(1.0, -e[n] * dt);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

ComplexState step(const HamiltonianSpec& spec, const ComplexState& state, double t_from,
                  double t_to, const PropagatorOptions& options) {
  if (!(t_to > t_from)) {
    throw Error(ErrorCode::invalid_argument, "step requires t_to > t_from");
  }
  if (state.dimension() != spec.dimension()) {
    throw Error(ErrorCode::dimension_mismatch, "state and Hamiltonian dimensions differ");
  }
  const double t_eval = options.rule == StepRule::midpoint ? 0.5 * (t_from + t_to) : t_from;
  const Matrix h = evaluate(spec, t_eval);
  const double defect = hermiticity_defect(h);
  if (defect > 1e-12 * std::max(1.0, h.cwiseAbs().maxCoeff())) {
    std::ostringstream os;
    os << "Hamiltonian not Hermitian at t = " << t_eval << " (defect " << defect << ")";
    throw Error(ErrorCode::non_hermitian, os.str());
  }
  return ComplexState::from_unitary_image(unitary_step(h, t_to - t_from) * state.amplitudes());
}

Trajectory propagate(const HamiltonianSpec& spec, const ComplexState& initial,
                     const TimeGrid& grid, const PropagatorOptions& options) {
  std::vector<ComplexState> states;
  states.reserve(grid.size());
  states.push_back(initial);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    states.push_back(step(spec, states.back(), grid.node(k - 1), grid.node(k), options));
  }
  return Trajectory(grid, std::move(states), spec.id());
}

// Caps memory: a stored trajectory holds one state per node.
constexpr double kMaxDefaultSteps = 4.0e5;

int default_steps(const HamiltonianSpec& spec, double duration) {
  // The rotating field also sets a rate: its eigenframe turns by omega dt per step.
  double rate = spec.norm_bound();
  if (const auto* p = spec.as_rotating()) rate = std::max(rate, p->omega);
  const double dt_max = std::sqrt(1e-9) / std::max(rate, 1e-300);
  const double n = std::ceil(duration / dt_max);
  return static_cast<int>(std::clamp(n, 1000.0, kMaxDefaultSteps));
}

CyclicityVerdict check_cyclic(const Trajectory& traj, double cyclic_tol) {
  const Complex ov = inner_product(traj.front(), traj.back());
  CyclicityVerdict v;
  v.tolerance = cyclic_tol;
  v.overlap_magnitude = std::min(1.0, std::abs(ov));
  v.is_cyclic = v.overlap_magnitude >= 1.0 - cyclic_tol;
  if (v.is_cyclic) v.total_phase = wrap_phase(std::arg(ov));
  return v;
}

}  // namespace geophase
