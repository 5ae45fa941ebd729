#pragma once

// Oracles and generators shared by the unit and acceptance tests. Closed
// forms here are written out independently of the library's spin:: helpers.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <numbers>
#include <random>

#include "geophase/error.hpp"
#include "geophase/state.hpp"

namespace geophase::testing {

inline constexpr double kPi = std::numbers::pi;
inline const Complex kI{0.0, 1.0};

// High-precision reference values (mpmath, 30 digits) for mu_b = 1, omega = 1, theta = pi/3.
inline constexpr double kRefAlpha = 0.333473172251832;
inline constexpr double kRefBetaUnwrapped = 5.516413477037245;
inline constexpr double kRefBetaWrapped = -0.766771830142341;
inline constexpr double kRefDynamical = -5.937052058618630;
inline constexpr double kRefTotalUnwrapped = 5.170280228476288;
inline constexpr double kRefTotalWrapped = -1.112905078703298;
inline constexpr double kRefInterference = 2.884115137740436;
// Resonance at omega = 1, theta = pi/3 from 4 mu^2 + 4 mu cos(theta) + 1 = (m/n)^2.
inline constexpr double kRefResonantMu13 = 1.186140661634507;
inline constexpr double kRefResonantMu12 = 0.651387818865997;
inline constexpr double kRefResonantMu25 = 0.922603939955857;

inline Vector vec(std::initializer_list<Complex> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index k = 0;
  for (const Complex x : xs) v(k++) = x;
  return v;
}

// exp(-i h t) for Hermitian h by diagonalization.
inline Matrix expm_hermitian(const Matrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
  Vector phases(h.rows());
  for (Index j = 0; j < h.rows(); ++j) phases(j) = std::exp(-kI * eig.eigenvalues()(j) * t);
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

inline Eigen::Matrix2cd sx() { Eigen::Matrix2cd m; m << 0, 1, 1, 0; return m; }
inline Eigen::Matrix2cd sy() { Eigen::Matrix2cd m; m << 0, -kI, kI, 0; return m; }
inline Eigen::Matrix2cd sz() { Eigen::Matrix2cd m; m << 1, 0, 0, -1; return m; }

// Static model H = -mu sigma_z with the cyclic branch at polar angle theta.
inline Vector static_exact(double mu, double theta, bool plus, double t) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  const Complex up = std::exp(kI * mu * t);
  const Complex down = std::exp(-kI * mu * t);
  return plus ? vec({c * up, s * down}) : vec({-s * up, c * down});
}

// Rotating model solved in the co-rotating frame:
// psi(t) = e^{-i omega t sz / 2} e^{-i (H(0) - omega sz / 2) t} psi(0).
inline Vector rotating_exact(double mu, double omega, double theta, const Vector& psi0, double t) {
  const Matrix h0 = -mu * (std::sin(theta) * sx() + std::cos(theta) * sz());
  const Matrix frame = h0 - 0.5 * omega * Matrix(sz());
  return expm_hermitian(0.5 * omega * Matrix(sz()), t) * expm_hermitian(frame, t) * psi0;
}

// Stationary state of the co-rotating generator: lower level for the plus
// branch. Its image under the frame rotation is the cyclic solution.
inline Vector rotating_cyclic_initial(double mu, double omega, double theta, bool plus) {
  const Matrix h0 = -mu * (std::sin(theta) * sx() + std::cos(theta) * sz());
  const Matrix frame = h0 - 0.5 * omega * Matrix(sz());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(frame);
  Vector v = eig.eigenvectors().col(plus ? 0 : 1);
  // Phase pinned so the upper component is real positive.
  const Complex p = std::abs(v(0)) > 1e-14 ? v(0) / std::abs(v(0)) : Complex(1.0);
  return v / p;
}

inline double tilt(double mu, double omega, double theta) {
  return std::atan2(omega * std::sin(theta), 2.0 * mu + omega * std::cos(theta));
}

inline double wrapped_distance(double a, double b) {
  return std::abs(std::remainder(a - b, 2.0 * kPi));
}

// Hand-rolled generators for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double phase() { return uniform(-kPi, kPi); }

  Vector vector(Index d) {
    std::normal_distribution<double> n;
    Vector v(d);
    for (Index j = 0; j < d; ++j) v(j) = Complex(n(rng_), n(rng_));
    return v;
  }
  ComplexState state(Index d) { return ComplexState(vector(d)); }

  Matrix hermitian(Index d, double scale = 1.0) {
    Matrix m(d, d);
    for (Index r = 0; r < d; ++r) m.row(r) = vector(d).transpose();
    return scale * 0.5 * (m + m.adjoint());
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Code of the geophase::Error thrown by f, or nullopt if it returns.
template <typename F>
std::optional<ErrorCode> error_code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace geophase::testing
