#include "geophase/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "geophase/error.hpp"

namespace geophase {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw Error(ErrorCode::invalid_argument, std::string(name) + " must be positive and finite");
  }
}

void require_polar_angle(double theta) {
  if (!(theta >= 0.0 && theta <= kPi)) {
    throw Error(ErrorCode::invalid_argument, "theta must lie in [0, pi]");
  }
}

double max_abs_eigenvalue(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Rotates v so that its largest-magnitude component is real positive.
void pin_phase(Eigen::Ref<Vector> v) {
  Index best = 0;
  v.cwiseAbs().maxCoeff(&best);
  const Complex c = v[best];
  if (std::abs(c) > 0.0) v *= std::conj(c) / std::abs(c);
}

}  // namespace

const char* to_string(Family family) noexcept {
  switch (family) {
    case Family::static_spin: return "static_spin";
    case Family::rotating_spin: return "rotating_spin";
    case Family::custom: return "custom";
  }
  return "unknown";
}

const char* to_string(Branch branch) noexcept {
  return branch == Branch::plus ? "plus" : "minus";
}

HamiltonianSpec HamiltonianSpec::static_spin(double mu_b, double theta) {
  require_positive(mu_b, "mu_b");
  require_polar_angle(theta);
  return HamiltonianSpec(StaticSpin{mu_b, theta});
}

HamiltonianSpec HamiltonianSpec::rotating_spin(double mu_b, double omega, double theta) {
  require_positive(mu_b, "mu_b");
  require_positive(omega, "omega");
  require_polar_angle(theta);
  return HamiltonianSpec(RotatingSpin{mu_b, omega, theta});
}

HamiltonianSpec HamiltonianSpec::custom(std::vector<double> times, std::vector<Matrix> matrices) {
  if (times.size() < 2 || times.size() != matrices.size()) {
    throw Error(ErrorCode::invalid_argument,
                "custom Hamiltonian needs at least two samples with one matrix per time");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw Error(ErrorCode::invalid_argument, "custom sample times must be strictly increasing");
    }
  }
  const Index d = matrices.front().rows();
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    const Matrix& h = matrices[i];
    if (h.rows() != d || h.cols() != d || d < 2) {
      throw Error(ErrorCode::dimension_mismatch, "custom samples must be square d x d with d >= 2");
    }
    if (hermiticity_defect(h) > 1e-9 * std::max(1.0, h.cwiseAbs().maxCoeff())) {
      throw Error(ErrorCode::non_hermitian,
                  "custom sample " + std::to_string(i) + " is not Hermitian");
    }
  }
  return HamiltonianSpec(CustomSamples{std::move(times), std::move(matrices)});
}

Family HamiltonianSpec::family() const noexcept {
  switch (model_.index()) {
    case 0: return Family::static_spin;
    case 1: return Family::rotating_spin;
    default: return Family::custom;
  }
}

Index HamiltonianSpec::dimension() const {
  if (const auto* c = as_custom()) return c->matrices.front().rows();
  return 2;
}

std::string HamiltonianSpec::id() const {
  std::ostringstream os;
  os.precision(17);
  if (const auto* s = as_static()) {
    os << "static_spin(mu_b=" << s->mu_b << ",theta=" << s->theta << ")";
  } else if (const auto* r = as_rotating()) {
    os << "rotating_spin(mu_b=" << r->mu_b << ",omega=" << r->omega << ",theta=" << r->theta << ")";
  } else {
    const auto& c = *as_custom();
    os << "custom(d=" << dimension() << ",samples=" << c.times.size() << ",t=[" << c.times.front()
       << "," << c.times.back() << "])";
  }
  return os.str();
}

std::optional<double> HamiltonianSpec::natural_period() const {
  if (const auto* s = as_static()) return kPi / s->mu_b;
  if (const auto* r = as_rotating()) return 2.0 * kPi / r->omega;
  return std::nullopt;
}

double HamiltonianSpec::norm_bound() const {
  if (const auto* s = as_static()) return s->mu_b;
  if (const auto* r = as_rotating()) return r->mu_b;
  double worst = 0.0;
  for (const auto& h : as_custom()->matrices) worst = std::max(worst, max_abs_eigenvalue(h));
  return worst;
}

double hermiticity_defect(const Matrix& h) {
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

Matrix evaluate(const HamiltonianSpec& spec, double t) {
  const auto& sigma = pauli();
  if (const auto* s = spec.as_static()) {
    return Matrix(-s->mu_b * sigma[2]);
  }
  if (const auto* r = spec.as_rotating()) {
    const double phi = r->omega * t;
    const double st = std::sin(r->theta);
    const Eigen::Matrix2cd h = -r->mu_b * (st * std::cos(phi) * sigma[0] +
                                           st * std::sin(phi) * sigma[1] +
                                           std::cos(r->theta) * sigma[2]);
    return Matrix(h);
  }
  const auto& c = *spec.as_custom();
  const double lo = c.times.front();
  const double hi = c.times.back();
  const double eps = 1e-9 * (hi - lo);
  if (t < lo - eps || t > hi + eps) {
    std::ostringstream os;
    os.precision(17);
    os << "t = " << t << " outside sampled range [" << lo << ", " << hi << "]";
    throw Error(ErrorCode::extrapolation, os.str());
  }
  const double tc = std::clamp(t, lo, hi);
  auto it = std::upper_bound(c.times.begin(), c.times.end(), tc);
  std::size_t i1 = static_cast<std::size_t>(it - c.times.begin());
  if (i1 >= c.times.size()) i1 = c.times.size() - 1;
  const std::size_t i0 = i1 - 1;
  const double w = (tc - c.times[i0]) / (c.times[i1] - c.times[i0]);
  const Matrix h = (1.0 - w) * c.matrices[i0] + w * c.matrices[i1];
  return 0.5 * (h + h.adjoint());
}

EigenFrame eigen_frame(const HamiltonianSpec& spec, const TimeGrid& grid, double gap_tol) {
  const Index d = spec.dimension();
  std::vector<Matrix> nodes;
  nodes.reserve(grid.size());
  std::vector<std::vector<double>> energies(static_cast<std::size_t>(d),
                                            std::vector<double>(grid.size()));

  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid.node(k);
    Eigen::SelfAdjointEigenSolver<Matrix> es(evaluate(spec, t));
    const auto& values = es.eigenvalues();
    Matrix vectors = es.eigenvectors();

    if (gap_tol > 0.0) {
      for (Index n = 0; n + 1 < d; ++n) {
        if (values[n + 1] - values[n] < gap_tol) {
          std::ostringstream os;
          os.precision(17);
          os << "eigenvalue gap " << values[n + 1] - values[n] << " below tolerance " << gap_tol
             << " at node " << k << " (t = " << t << ")";
          throw Error(ErrorCode::degenerate_spectrum, os.str());
        }
      }
    }

    Matrix frame(d, d);
    std::vector<Index> source(static_cast<std::size_t>(d));
    if (k == 0) {
      for (Index n = 0; n < d; ++n) {
        source[static_cast<std::size_t>(n)] = n;
        frame.col(n) = vectors.col(n);
        pin_phase(frame.col(n));
      }
    } else {
      // Greedy assignment of new eigenvectors to existing tracks by overlap.
      const Matrix& prev = nodes.back();
      const Eigen::MatrixXd overlap = (prev.adjoint() * vectors).cwiseAbs();
      std::vector<bool> track_done(static_cast<std::size_t>(d), false);
      std::vector<bool> vec_used(static_cast<std::size_t>(d), false);
      for (Index round = 0; round < d; ++round) {
        double best = -1.0;
        Index bt = 0, bv = 0;
        for (Index n = 0; n < d; ++n) {
          if (track_done[static_cast<std::size_t>(n)]) continue;
          for (Index j = 0; j < d; ++j) {
            if (vec_used[static_cast<std::size_t>(j)]) continue;
            if (overlap(n, j) > best) {
              best = overlap(n, j);
              bt = n;
              bv = j;
            }
          }
        }
        track_done[static_cast<std::size_t>(bt)] = true;
        vec_used[static_cast<std::size_t>(bv)] = true;
        source[static_cast<std::size_t>(bt)] = bv;
        Vector v = vectors.col(bv);
        const Complex ov = prev.col(bt).dot(v);
        if (std::abs(ov) > 0.0) v *= std::conj(ov) / std::abs(ov);
        frame.col(bt) = v;
      }
    }
    for (Index n = 0; n < d; ++n) {
      energies[static_cast<std::size_t>(n)][k] = values[source[static_cast<std::size_t>(n)]];
    }
    nodes.push_back(std::move(frame));
  }

  const Matrix h0 = evaluate(spec, grid.t_start());
  const Matrix h1 = evaluate(spec, grid.t_end());
  const double scale = std::max(1.0, h0.cwiseAbs().maxCoeff());
  const bool closed = (h1 - h0).cwiseAbs().maxCoeff() <= 1e-12 * scale;
  return EigenFrame{FrameTrajectory(grid, std::move(nodes)), std::move(energies), closed};
}

double alpha_tilt(double mu_b, double omega, double theta) {
  const double num = omega * std::sin(theta);
  const double den = 2.0 * mu_b + omega * std::cos(theta);
  // Both vanish only at theta = pi, omega = 2 mu_b; sin(pi) is not exactly 0.
  const double scale = 64.0 * std::numeric_limits<double>::epsilon() * (2.0 * std::abs(mu_b) + std::abs(omega));
  if (std::abs(num) <= scale && std::abs(den) <= scale) {
    throw Error(ErrorCode::undefined_tilt, "tilt angle undefined: numerator and denominator vanish");
  }
  return std::atan2(num, den);
}

PhaseReport analytic_phase_report(const HamiltonianSpec& spec, Branch branch) {
  const double sign = branch == Branch::plus ? 1.0 : -1.0;
  PhaseReport r;
  if (const auto* s = spec.as_static()) {
    const double period = kPi / s->mu_b;
    const double c = std::cos(s->theta);
    const double beta = sign * kPi * (1.0 - c);
    r.aa_phase_unwrapped = beta;
    r.aa_phase = wrap_phase(beta);
    r.dynamical = -sign * kPi * c;
    r.total_phase = wrap_phase(beta - r.dynamical);
    r.berry_phase = 0.0;
    r.berry_phase_unwrapped = 0.0;
    // Polarization azimuth runs phi = -2 mu_b t: one clockwise turn per period.
    r.solid_angle = branch == Branch::plus ? -2.0 * kPi * (1.0 - c) : -2.0 * kPi * (1.0 + c);
    r.period = period;
  } else if (const auto* p = spec.as_rotating()) {
    const double period = 2.0 * kPi / p->omega;
    const double alpha = alpha_tilt(p->mu_b, p->omega, p->theta);
    const double ct = std::cos(p->theta - alpha);
    const double beta = kPi * (1.0 + sign * ct);
    r.aa_phase_unwrapped = beta;
    r.aa_phase = wrap_phase(beta);
    r.dynamical = -sign * p->mu_b * std::cos(alpha) * period;
    r.total_phase = wrap_phase(beta - r.dynamical);
    const double gamma = kPi * (1.0 + sign * std::cos(p->theta));
    r.berry_phase_unwrapped = gamma;
    r.berry_phase = wrap_phase(gamma);
    // Azimuth runs phi = omega t: one counter-clockwise turn per period.
    r.solid_angle = 2.0 * kPi * (1.0 - sign * ct);
    r.period = period;
  } else {
    throw Error(ErrorCode::no_oracle, "no closed-form phases for custom Hamiltonians");
  }
  r.decomposition_residual = std::abs(wrap_phase(r.total_phase - r.aa_phase + r.dynamical));
  return r;
}

double analytic_interference(const HamiltonianSpec& spec, Branch branch) {
  return 2.0 + 2.0 * std::cos(analytic_phase_report(spec, branch).total_phase);
}

double unsigned_solid_angle_interference(const HamiltonianSpec& spec, Branch branch) {
  if (branch != Branch::plus) {
    throw Error(ErrorCode::no_oracle, "unsigned solid-angle expression is stated for the plus branch only");
  }
  if (const auto* s = spec.as_static()) {
    const double c = std::cos(s->theta);
    const double omega_unsigned = 2.0 * kPi * (1.0 - c);
    return 2.0 + 2.0 * std::cos(kPi * c - 0.5 * omega_unsigned);
  }
  if (const auto* p = spec.as_rotating()) {
    const double alpha = alpha_tilt(p->mu_b, p->omega, p->theta);
    const double period = 2.0 * kPi / p->omega;
    const double omega_unsigned = 2.0 * kPi * (1.0 - std::cos(p->theta - alpha));
    return 2.0 + 2.0 * std::cos(p->mu_b * std::cos(alpha) * period - 0.5 * omega_unsigned);
  }
  throw Error(ErrorCode::no_oracle, "no closed-form interference for custom Hamiltonians");
}

namespace spin {

ComplexState basis_vector(double theta, double phi, Branch branch) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const Complex e = std::polar(1.0, -phi);
  Vector v(2);
  if (branch == Branch::plus) {
    v << c * e, s;
  } else {
    v << s * e, -c;
  }
  return ComplexState(std::move(v));
}

ComplexState static_solution(const StaticSpin& p, Branch branch, double t) {
  const double c = std::cos(0.5 * p.theta);
  const double s = std::sin(0.5 * p.theta);
  const Complex up = std::polar(1.0, p.mu_b * t);
  const Complex down = std::polar(1.0, -p.mu_b * t);
  Vector v(2);
  if (branch == Branch::plus) {
    v << c * up, s * down;
  } else {
    v << -s * up, c * down;
  }
  return ComplexState(std::move(v));
}

ComplexState static_w(const StaticSpin& p, Branch branch, double t) {
  const double c = std::cos(0.5 * p.theta);
  const double s = std::sin(0.5 * p.theta);
  Vector v(2);
  if (branch == Branch::plus) {
    v << c, s * std::polar(1.0, -2.0 * p.mu_b * t);
  } else {
    v << -s * std::polar(1.0, 2.0 * p.mu_b * t), c;
  }
  return ComplexState(std::move(v));
}

ComplexState rotating_eigenvector(const RotatingSpin& p, Branch branch, double t) {
  return basis_vector(p.theta, p.omega * t, branch);
}

ComplexState rotating_w(const RotatingSpin& p, double tilt, Branch branch, double t) {
  return basis_vector(p.theta - tilt, p.omega * t, branch);
}

double frame_energy(const StaticSpin& p, Branch branch) {
  return branch == Branch::plus ? -p.mu_b : p.mu_b;
}

double frame_energy(const RotatingSpin& p, Branch branch) {
  const double alpha = alpha_tilt(p.mu_b, p.omega, p.theta);
  const double ct = std::cos(p.theta - alpha);
  return branch == Branch::plus ? -p.mu_b * std::cos(alpha) - 0.5 * p.omega * (1.0 + ct)
                                : p.mu_b * std::cos(alpha) - 0.5 * p.omega * (1.0 - ct);
}

ComplexState rotating_solution(const RotatingSpin& p, Branch branch, double t) {
  const double alpha = alpha_tilt(p.mu_b, p.omega, p.theta);
  return rotating_w(p, alpha, branch, t).rephased(-frame_energy(p, branch) * t);
}

ComplexState rotating_superposition_initial(const RotatingSpin& p, double mix, Branch branch) {
  const double alpha = alpha_tilt(p.mu_b, p.omega, p.theta);
  const Vector& wp = rotating_w(p, alpha, Branch::plus, 0.0).amplitudes();
  const Vector& wm = rotating_w(p, alpha, Branch::minus, 0.0).amplitudes();
  const double c = std::cos(0.5 * mix);
  const double s = std::sin(0.5 * mix);
  if (branch == Branch::plus) return ComplexState(Vector(c * wp + s * wm));
  return ComplexState(Vector(-s * wp + c * wm));
}

FrameTrajectory static_w_frame(const StaticSpin& p, const TimeGrid& grid) {
  std::vector<Matrix> nodes;
  nodes.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid.node(k);
    Matrix w(2, 2);
    w.col(0) = static_w(p, Branch::plus, t).amplitudes();
    w.col(1) = static_w(p, Branch::minus, t).amplitudes();
    nodes.push_back(std::move(w));
  }
  return FrameTrajectory(grid, std::move(nodes));
}

FrameTrajectory rotating_w_frame(const RotatingSpin& p, double tilt, const TimeGrid& grid) {
  std::vector<Matrix> nodes;
  nodes.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid.node(k);
    Matrix w(2, 2);
    w.col(0) = rotating_w(p, tilt, Branch::plus, t).amplitudes();
    w.col(1) = rotating_w(p, tilt, Branch::minus, t).amplitudes();
    nodes.push_back(std::move(w));
  }
  return FrameTrajectory(grid, std::move(nodes));
}

}  // namespace spin

}  // namespace geophase
