#include "geophase/gauge.hpp"

#include <cmath>
#include <numbers>

#include "geophase/error.hpp"
#include "geophase/phases.hpp"

namespace geophase {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class Generator>
double central_difference_residual(const Trajectory& traj, const HamiltonianSpec& spec,
                                   Generator&& energy_shift) {
  if (traj.size() < 3) {
    throw Error(ErrorCode::invalid_argument, "residual needs at least 3 nodes");
  }
  if (traj.dimension() != spec.dimension()) {
    throw Error(ErrorCode::dimension_mismatch, "trajectory and Hamiltonian dimensions differ");
  }
  const TimeGrid& g = traj.grid();
  const Complex i{0.0, 1.0};
  const double inv = 1.0 / (2.0 * g.dt());
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < traj.size(); ++k) {
    const Vector& psi = traj[k].amplitudes();
    const Matrix h = evaluate(spec, g.node(k));
    const Vector hpsi = h * psi;
    const double shift = energy_shift(k, psi, hpsi);
    const Vector lhs = i * inv * (traj[k + 1].amplitudes() - traj[k - 1].amplitudes());
    worst = std::max(worst, (lhs - (hpsi - shift * psi)).norm());
  }
  return worst;
}

}  // namespace

GaugeFunction::GaugeFunction(double t_start, double t_end, double constant, double linear,
                             std::vector<double> cos_coeffs, std::vector<double> sin_coeffs)
    : t_start_(t_start),
      t_end_(t_end),
      constant_(constant),
      linear_(linear),
      cos_(std::move(cos_coeffs)),
      sin_(std::move(sin_coeffs)) {
  if (!(t_end > t_start)) {
    throw Error(ErrorCode::invalid_argument, "gauge function interval must have t_end > t_start");
  }
}

GaugeFunction GaugeFunction::zero(double t_start, double t_end) {
  return GaugeFunction(t_start, t_end, 0.0, 0.0, {}, {});
}

GaugeFunction GaugeFunction::constant(double t_start, double t_end, double value) {
  return GaugeFunction(t_start, t_end, value, 0.0, {}, {});
}

GaugeFunction GaugeFunction::random(std::mt19937_64& rng, double t_start, double t_end,
                                    bool periodic, int modes) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double c = u(rng);
  const double r = periodic ? 0.0 : u(rng);
  std::vector<double> a(static_cast<std::size_t>(modes));
  std::vector<double> b(static_cast<std::size_t>(modes));
  for (int m = 0; m < modes; ++m) {
    a[static_cast<std::size_t>(m)] = u(rng);
    b[static_cast<std::size_t>(m)] = u(rng);
  }
  return GaugeFunction(t_start, t_end, c, r, std::move(a), std::move(b));
}

double GaugeFunction::operator()(double t) const {
  const double s = (t - t_start_) / (t_end_ - t_start_);
  double v = constant_ + linear_ * s;
  for (std::size_t m = 0; m < cos_.size(); ++m) v += cos_[m] * std::cos(kTwoPi * (m + 1) * s);
  for (std::size_t m = 0; m < sin_.size(); ++m) v += sin_[m] * std::sin(kTwoPi * (m + 1) * s);
  return v;
}

double GaugeFunction::derivative(double t) const {
  const double span = t_end_ - t_start_;
  const double s = (t - t_start_) / span;
  double v = linear_;
  for (std::size_t m = 0; m < cos_.size(); ++m) {
    v -= cos_[m] * kTwoPi * (m + 1) * std::sin(kTwoPi * (m + 1) * s);
  }
  for (std::size_t m = 0; m < sin_.size(); ++m) {
    v += sin_[m] * kTwoPi * (m + 1) * std::cos(kTwoPi * (m + 1) * s);
  }
  return v / span;
}

Trajectory rephase_trajectory(const Trajectory& traj, const GaugeFunction& g) {
  std::vector<ComplexState> states;
  states.reserve(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    states.push_back(traj[k].rephased(g(traj.grid().node(k))));
  }
  return Trajectory(traj.grid(), std::move(states), traj.spec_id());
}

FrameTrajectory rephase_frame(const FrameTrajectory& frame, std::span<const GaugeFunction> gauges) {
  if (static_cast<Index>(gauges.size()) != frame.dimension()) {
    throw Error(ErrorCode::dimension_mismatch, "need one gauge function per frame vector");
  }
  std::vector<Matrix> nodes;
  nodes.reserve(frame.size());
  for (std::size_t k = 0; k < frame.size(); ++k) {
    const double t = frame.grid().node(k);
    Matrix w = frame[k];
    for (Index n = 0; n < w.cols(); ++n) {
      w.col(n) *= std::polar(1.0, gauges[static_cast<std::size_t>(n)](t));
    }
    nodes.push_back(std::move(w));
  }
  return FrameTrajectory(frame.grid(), std::move(nodes));
}

Trajectory parallel_transport_representative(const Trajectory& traj) {
  std::vector<ComplexState> states;
  states.reserve(traj.size());
  states.push_back(traj.front());
  double accumulated = 0.0;
  for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
    const Complex ov = inner_product(traj[k], traj[k + 1]);
    if (std::abs(ov) < kMinConsecutiveOverlap) {
      throw Error(ErrorCode::under_resolved,
                  "under-resolved track at node " + std::to_string(k));
    }
    accumulated -= std::arg(ov);
    states.push_back(traj[k + 1].rephased(accumulated));
  }
  return Trajectory(traj.grid(), std::move(states), traj.spec_id());
}

double nonlinear_residual(const Trajectory& bar_traj, const HamiltonianSpec& spec) {
  return central_difference_residual(
      bar_traj, spec,
      [](std::size_t, const Vector& psi, const Vector& hpsi) { return psi.dot(hpsi).real(); });
}

double shifted_hamiltonian_residual(const Trajectory& traj, const HamiltonianSpec& spec,
                                    const GaugeFunction& shift) {
  const TimeGrid& g = traj.grid();
  return central_difference_residual(
      traj, spec,
      [&](std::size_t k, const Vector&, const Vector&) { return shift.derivative(g.node(k)); });
}

double density_invariance(const Trajectory& traj, const GaugeFunction& g) {
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const ComplexState moved = traj[k].rephased(g(traj.grid().node(k)));
    worst = std::max(worst, (traj[k].projector() - moved.projector()).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace geophase
