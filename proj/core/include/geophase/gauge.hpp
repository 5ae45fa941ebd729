#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "geophase/hamiltonian.hpp"
#include "geophase/state.hpp"

namespace geophase {

/// alpha(t) = c + r s + sum_m [a_m cos(2 pi m s) + b_m sin(2 pi m s)] with
/// s = (t - t_start) / (t_end - t_start). Periodic iff r == 0.
class GaugeFunction {
 public:
  GaugeFunction(double t_start, double t_end, double constant, double linear,
                std::vector<double> cos_coeffs, std::vector<double> sin_coeffs);

  static GaugeFunction zero(double t_start, double t_end);
  static GaugeFunction constant(double t_start, double t_end, double value);
  /// Fourier series with `modes` modes, every coefficient uniform in [-1, 1];
  /// the linear coefficient is drawn too unless `periodic`.
  static GaugeFunction random(std::mt19937_64& rng, double t_start, double t_end, bool periodic,
                              int modes = 8);

  double operator()(double t) const;
  double derivative(double t) const;
  bool periodic() const noexcept { return linear_ == 0.0; }
  double t_start() const noexcept { return t_start_; }
  double t_end() const noexcept { return t_end_; }

 private:
  double t_start_;
  double t_end_;
  double constant_;
  double linear_;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

/// psi(t_k) -> e^{i alpha(t_k)} psi(t_k).
Trajectory rephase_trajectory(const Trajectory& traj, const GaugeFunction& g);

/// w_n(t_k) -> e^{i alpha_n(t_k)} w_n(t_k); one gauge function per column.
FrameTrajectory rephase_frame(const FrameTrajectory& frame, std::span<const GaugeFunction> gauges);

/// Representative whose consecutive overlaps are all real positive, with
/// psi_bar(t_0) = psi(t_0).
Trajectory parallel_transport_representative(const Trajectory& traj);

/// max over interior nodes of
/// |i (psi_{k+1} - psi_{k-1}) / 2dt - (H - <psi_k|H|psi_k>) psi_k|.
double nonlinear_residual(const Trajectory& bar_traj, const HamiltonianSpec& spec);

/// max over interior nodes of |i (psi_{k+1} - psi_{k-1}) / 2dt - (H - shift'(t_k)) psi_k|:
/// the residual against the gauge-shifted Hamiltonian H - d alpha/dt.
double shifted_hamiltonian_residual(const Trajectory& traj, const HamiltonianSpec& spec,
                                    const GaugeFunction& shift);

/// max over nodes of max_ij ||psi><psi| - |psi'><psi'||_ij for psi' the rephased state.
double density_invariance(const Trajectory& traj, const GaugeFunction& g);

}  // namespace geophase
