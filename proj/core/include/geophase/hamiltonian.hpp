#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "geophase/phase_report.hpp"
#include "geophase/state.hpp"

namespace geophase {

enum class Family { static_spin, rotating_spin, custom };
enum class Branch { plus, minus };

const char* to_string(Family family) noexcept;
const char* to_string(Branch branch) noexcept;

/// H = -mu_b sigma_z. `theta` is not part of H: it fixes the polar angle of
/// the cyclic branches psi_+/psi_- that the oracles describe.
struct StaticSpin {
  double mu_b = 1.0;
  double theta = 0.0;
};

/// H(t) = -mu_b (sin(theta) cos(omega t), sin(theta) sin(omega t), cos(theta)) . sigma.
struct RotatingSpin {
  double mu_b = 1.0;
  double omega = 1.0;
  double theta = 0.0;
};

/// Hermitian samples H(t_i), linearly interpolated entrywise and
/// re-symmetrized.
struct CustomSamples {
  std::vector<double> times;
  std::vector<Matrix> matrices;
};

class HamiltonianSpec {
 public:
  static HamiltonianSpec static_spin(double mu_b, double theta = 0.0);
  static HamiltonianSpec rotating_spin(double mu_b, double omega, double theta);
  static HamiltonianSpec custom(std::vector<double> times, std::vector<Matrix> matrices);

  Family family() const noexcept;
  Index dimension() const;
  /// Stable textual identifier, e.g. "rotating_spin(mu_b=1,omega=1,theta=1.0471975511965976)".
  std::string id() const;

  const StaticSpin* as_static() const noexcept { return std::get_if<StaticSpin>(&model_); }
  const RotatingSpin* as_rotating() const noexcept { return std::get_if<RotatingSpin>(&model_); }
  const CustomSamples* as_custom() const noexcept { return std::get_if<CustomSamples>(&model_); }

  /// pi/mu_b for static_spin, 2 pi/omega for rotating_spin.
  std::optional<double> natural_period() const;
  /// Upper bound on the spectral norm of H(t).
  double norm_bound() const;

 private:
  using Model = std::variant<StaticSpin, RotatingSpin, CustomSamples>;
  explicit HamiltonianSpec(Model model) : model_(std::move(model)) {}
  Model model_;
};

/// Hermitian d x d matrix H(t). Custom specs throw outside the sampled range.
Matrix evaluate(const HamiltonianSpec& spec, double t);

/// max_ij |H - H^dagger|.
double hermiticity_defect(const Matrix& h);

inline constexpr double kDefaultGapTolerance = 1e-8;

/// Instantaneous eigenvectors continued node to node.
struct EigenFrame {
  FrameTrajectory frame;
  /// energies[n][k] = E_n(t_k).
  std::vector<std::vector<double>> energies;
  /// H(t_end) == H(t_start) within 1e-12 (relative to the norm of H).
  bool loop_closed = false;
};

/// Eigenframe over `grid`. Tracks are ordered ascending at t_start and then
/// followed by maximal overlap; each vector is rephased so that
/// <v_n(t_{k-1})|v_n(t_k)> is real positive. Throws degenerate_spectrum if
/// any gap falls below `gap_tol` (pass gap_tol <= 0 to allow crossings).
EigenFrame eigen_frame(const HamiltonianSpec& spec, const TimeGrid& grid,
                       double gap_tol = kDefaultGapTolerance);

/// Tilt angle that diagonalizes the rotating-frame effective Hamiltonian:
/// atan2(omega sin(theta), 2 mu_b + omega cos(theta)).
double alpha_tilt(double mu_b, double omega, double theta);

/// Closed-form phases of the cyclic branches of the built-in spin models.
/// Throws no_oracle for custom specs.
PhaseReport analytic_phase_report(const HamiltonianSpec& spec, Branch branch);

/// |psi(T) + psi(0)|^2 = 2 + 2 cos(total phase) from the closed forms.
double analytic_interference(const HamiltonianSpec& spec, Branch branch);

/// The textbook interference expression for the plus branch written with an
/// unsigned solid angle: 2 + 2 cos(dynamical - Omega/2) with
/// Omega = 2 pi (1 - cos(tilt)). Agrees with analytic_interference for the
/// rotating model; for the static model it differs unless cos(theta) is an
/// integer. Only the plus branch is defined.
double unsigned_solid_angle_interference(const HamiltonianSpec& spec, Branch branch);

namespace spin {

/// Spinor basis (cos(theta/2) e^{-i phi}, sin(theta/2)) and
/// (sin(theta/2) e^{-i phi}, -cos(theta/2)).
ComplexState basis_vector(double theta, double phi, Branch branch);

/// Exact cyclic solution psi_+/psi_- of the static model at time t.
ComplexState static_solution(const StaticSpin& p, Branch branch, double t);
/// Periodic representative w_+/w_- of the static model.
ComplexState static_w(const StaticSpin& p, Branch branch, double t);

/// Instantaneous eigenvector v_+/v_- of the rotating model.
ComplexState rotating_eigenvector(const RotatingSpin& p, Branch branch, double t);
/// Tilted frame vector w_+/w_- for an arbitrary tilt angle.
ComplexState rotating_w(const RotatingSpin& p, double tilt, Branch branch, double t);
/// Constant diagonal of the effective Hamiltonian in the closed-form w-frame:
/// psi = w e^{-i E t}.
double frame_energy(const StaticSpin& p, Branch branch);
double frame_energy(const RotatingSpin& p, Branch branch);
/// Exact cyclic solution psi_+/psi_- of the rotating model (tilt = alpha_tilt).
ComplexState rotating_solution(const RotatingSpin& p, Branch branch, double t);

/// cos(mix/2) w_+(0) + sin(mix/2) w_-(0) for plus, -sin(mix/2) w_+(0) +
/// cos(mix/2) w_-(0) for minus, at the exact tilt.
ComplexState rotating_superposition_initial(const RotatingSpin& p, double mix, Branch branch);

/// Frame with columns (w_+, w_-) sampled from the closed forms.
FrameTrajectory static_w_frame(const StaticSpin& p, const TimeGrid& grid);
FrameTrajectory rotating_w_frame(const RotatingSpin& p, double tilt, const TimeGrid& grid);

}  // namespace spin

}  // namespace geophase
