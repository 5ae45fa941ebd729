#pragma once

#include "geophase/hamiltonian.hpp"
#include "geophase/state.hpp"

namespace geophase {

/// Coefficients (c1, c2) of c1 psi_1 + c2 psi_2; |c1|^2 + |c2|^2 = 1.
class SuperpositionSpec {
 public:
  SuperpositionSpec(Complex c1, Complex c2);

  /// (cos(mix/2), sin(mix/2)).
  static SuperpositionSpec mixing(double mix);

  Complex c1() const noexcept { return c1_; }
  Complex c2() const noexcept { return c2_; }

 private:
  Complex c1_;
  Complex c2_;
};

/// Nodewise c1 psi_1 + c2 psi_2. The result is not renormalized: throws
/// invalid_argument when any node's norm is off by more than 1e-8, which
/// happens when the constituents are not orthogonal.
Trajectory superpose(const Trajectory& t1, const Trajectory& t2, const SuperpositionSpec& s);

/// max over interior nodes of |i (psi_{k+1} - psi_{k-1}) / 2dt - H psi_k|.
double linear_residual(const Trajectory& traj, const HamiltonianSpec& spec);

struct NonlinearSuperpositionResult {
  /// max_k |<psi_1|H|psi_1> - <psi_2|H|psi_2>|.
  double condition_gap = 0.0;
  /// nonlinear_residual of c1 psi_bar_1 + c2 psi_bar_2.
  double residual = 0.0;
  /// Residual of the superposition against H - kappa(t) with kappa the
  /// best single scalar at each node; vanishes iff the constituents share
  /// one phase generator.
  double common_generator_residual = 0.0;
  /// max_k |2 Re(conj(c1) c2 <psi_bar_1|H|psi_bar_2>)|, the interference term
  /// of <H> in the superposed representative.
  double cross_term = 0.0;
};

/// Superposes the parallel-transport representatives of two Schrodinger
/// solutions and measures how far the result is from solving the
/// representative's nonlinear equation.
NonlinearSuperpositionResult nonlinear_superposition_test(const Trajectory& t1,
                                                          const Trajectory& t2,
                                                          const SuperpositionSpec& s,
                                                          const HamiltonianSpec& spec);

/// |a + b|^2 = 2 + 2 Re <a|b>.
double interference_intensity(const ComplexState& a, const ComplexState& b);

struct ResonanceResidual {
  /// T omega / 2 pi.
  double n_value = 0.0;
  /// T [2 mu_b cos(alpha) + omega cos(theta - alpha)] / 2 pi.
  double m_value = 0.0;
  double n_residual = 0.0;
  double m_residual = 0.0;
};

/// Distances of the two resonance quantities to the nearest integers.
ResonanceResidual resonance_check(const RotatingSpin& params, double period);

/// mu_b > 0 for which a superposition of the two rotating-model branches is
/// cyclic over T = 2 pi n / omega with m relative windings, found by
/// bisection on the resonance condition. Requires 0 < n < m.
double solve_resonant_mu_b(double omega, double theta, int n, int m);

struct AdiabaticConditions {
  /// max_k |E_a(t_k) - E_b(t_k)|.
  double pointwise_gap = 0.0;
  /// |int E_a dt - int E_b dt| (trapezoid).
  double integrated_gap = 0.0;
  double tolerance = 0.0;
  /// pointwise_gap <= tolerance.
  bool stronger_holds = false;
  /// integrated_gap <= tolerance.
  bool weaker_holds = false;
};

/// Energy tracks follow eigen_frame with crossings allowed.
AdiabaticConditions adiabatic_interference_conditions(const HamiltonianSpec& spec,
                                                      const TimeGrid& grid, Index track_a = 0,
                                                      Index track_b = 1, double tolerance = 1e-9);

}  // namespace geophase
