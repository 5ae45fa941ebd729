#include "geophase/superposition.hpp"

#include <cmath>
#include <numbers>

#include "geophase/error.hpp"
#include "geophase/gauge.hpp"

namespace geophase {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double distance_to_integer(double x) { return std::abs(x - std::round(x)); }

double resonance_m_value(double mu_b, double omega, double theta, double period) {
  const double alpha = alpha_tilt(mu_b, omega, theta);
  return period * (2.0 * mu_b * std::cos(alpha) + omega * std::cos(theta - alpha)) / kTwoPi;
}

void require_same_grid(const Trajectory& a, const Trajectory& b) {
  if (!(a.grid() == b.grid())) {
    throw Error(ErrorCode::grid_mismatch, "trajectories live on different grids");
  }
  if (a.dimension() != b.dimension()) {
    throw Error(ErrorCode::dimension_mismatch, "trajectories differ in dimension");
  }
}

}  // namespace

SuperpositionSpec::SuperpositionSpec(Complex c1, Complex c2) : c1_(c1), c2_(c2) {
  if (std::abs(std::norm(c1) + std::norm(c2) - 1.0) > 1e-12) {
    throw Error(ErrorCode::invalid_argument, "superposition coefficients must satisfy |c1|^2 + |c2|^2 = 1");
  }
}

SuperpositionSpec SuperpositionSpec::mixing(double mix) {
  return SuperpositionSpec(std::cos(0.5 * mix), std::sin(0.5 * mix));
}

Trajectory superpose(const Trajectory& t1, const Trajectory& t2, const SuperpositionSpec& s) {
  require_same_grid(t1, t2);
  std::vector<ComplexState> states;
  states.reserve(t1.size());
  for (std::size_t k = 0; k < t1.size(); ++k) {
    Vector v = s.c1() * t1[k].amplitudes() + s.c2() * t2[k].amplitudes();
    const double n = v.norm();
    if (std::abs(n - 1.0) > 1e-8) {
      throw Error(ErrorCode::invalid_argument,
                  "superposition norm " + std::to_string(n) + " at node " + std::to_string(k) +
                      "; constituents must be orthogonal");
    }
    states.push_back(ComplexState(std::move(v)));
  }
  return Trajectory(t1.grid(), std::move(states), t1.spec_id());
}

double linear_residual(const Trajectory& traj, const HamiltonianSpec& spec) {
  return shifted_hamiltonian_residual(traj, spec,
                                      GaugeFunction::zero(traj.grid().t_start(), traj.grid().t_end()));
}

NonlinearSuperpositionResult nonlinear_superposition_test(const Trajectory& t1,
                                                          const Trajectory& t2,
                                                          const SuperpositionSpec& s,
                                                          const HamiltonianSpec& spec) {
  require_same_grid(t1, t2);
  const TimeGrid& g = t1.grid();
  NonlinearSuperpositionResult r;
  for (std::size_t k = 0; k < t1.size(); ++k) {
    const Matrix h = evaluate(spec, g.node(k));
    const double e1 = t1[k].amplitudes().dot(h * t1[k].amplitudes()).real();
    const double e2 = t2[k].amplitudes().dot(h * t2[k].amplitudes()).real();
    r.condition_gap = std::max(r.condition_gap, std::abs(e1 - e2));
  }

  const Trajectory bar1 = parallel_transport_representative(t1);
  const Trajectory bar2 = parallel_transport_representative(t2);
  const Trajectory sum = superpose(bar1, bar2, s);
  r.residual = nonlinear_residual(sum, spec);

  const Complex i{0.0, 1.0};
  const double inv = 1.0 / (2.0 * g.dt());
  for (std::size_t k = 0; k < sum.size(); ++k) {
    const Matrix h = evaluate(spec, g.node(k));
    const Complex cross = std::conj(s.c1()) * s.c2() *
                          bar1[k].amplitudes().dot(h * bar2[k].amplitudes());
    r.cross_term = std::max(r.cross_term, std::abs(2.0 * cross.real()));
    if (k == 0 || k + 1 == sum.size()) continue;
    const Vector& psi = sum[k].amplitudes();
    const Vector defect = i * inv * (sum[k + 1].amplitudes() - sum[k - 1].amplitudes()) - h * psi;
    // Best kappa for |defect + kappa psi| is -<psi|defect> (|psi| = 1).
    const Complex kappa = -psi.dot(defect);
    r.common_generator_residual =
        std::max(r.common_generator_residual, (defect + kappa.real() * psi).norm());
  }
  return r;
}

double interference_intensity(const ComplexState& a, const ComplexState& b) {
  return 2.0 + 2.0 * inner_product(a, b).real();
}

ResonanceResidual resonance_check(const RotatingSpin& params, double period) {
  if (!(period > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "resonance check requires T > 0");
  }
  ResonanceResidual r;
  r.n_value = period * params.omega / kTwoPi;
  r.m_value = resonance_m_value(params.mu_b, params.omega, params.theta, period);
  r.n_residual = distance_to_integer(r.n_value);
  r.m_residual = distance_to_integer(r.m_value);
  return r;
}

double solve_resonant_mu_b(double omega, double theta, int n, int m) {
  if (!(omega > 0.0) || n <= 0 || m <= n) {
    throw Error(ErrorCode::invalid_argument, "resonance solve needs omega > 0 and 0 < n < m");
  }
  const double period = kTwoPi * n / omega;
  auto f = [&](double mu_b) { return resonance_m_value(mu_b, omega, theta, period) - m; };
  // The m-value is n at mu_b -> 0 and grows without bound, crossing each
  // m > n exactly once.
  double lo = 1e-12;
  if (f(lo) >= 0.0) {
    throw Error(ErrorCode::invalid_argument, "no positive mu_b reaches the requested winding m");
  }
  double hi = 1.0;
  while (f(hi) < 0.0) {
    hi *= 2.0;
    if (hi > 1e12) throw Error(ErrorCode::invalid_argument, "resonance root not bracketed");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

AdiabaticConditions adiabatic_interference_conditions(const HamiltonianSpec& spec,
                                                      const TimeGrid& grid, Index track_a,
                                                      Index track_b, double tolerance) {
  const Index d = spec.dimension();
  if (track_a < 0 || track_b < 0 || track_a >= d || track_b >= d) {
    throw Error(ErrorCode::invalid_argument, "energy track index out of range");
  }
  const EigenFrame frame = eigen_frame(spec, grid, 0.0);
  const auto& ea = frame.energies[static_cast<std::size_t>(track_a)];
  const auto& eb = frame.energies[static_cast<std::size_t>(track_b)];
  AdiabaticConditions r;
  r.tolerance = tolerance;
  double integral = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double diff = ea[k] - eb[k];
    r.pointwise_gap = std::max(r.pointwise_gap, std::abs(diff));
    integral += ((k == 0 || k + 1 == grid.size()) ? 0.5 : 1.0) * diff;
  }
  r.integrated_gap = std::abs(integral * grid.dt());
  r.stronger_holds = r.pointwise_gap <= tolerance;
  r.weaker_holds = r.integrated_gap <= tolerance;
  return r;
}

}  // namespace geophase
