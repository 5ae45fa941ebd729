#include <gtest/gtest.h>

#include "geophase/gauge.hpp"
#include "geophase/phases.hpp"
#include "geophase/wframe.hpp"
#include "support/test_support.hpp"

namespace geophase {
namespace {

using namespace testing;

struct RotatingCase {
  RotatingSpin p{1.0, 1.0, kPi / 3.0};
  HamiltonianSpec spec = HamiltonianSpec::rotating_spin(1.0, 1.0, kPi / 3.0);
  Trajectory traj;
  CyclicityVerdict verdict;
  FrameTrajectory frame;

  explicit RotatingCase(int steps)
      : traj(propagate(spec, ComplexState(rotating_cyclic_initial(1.0, 1.0, kPi / 3.0, true)),
                       TimeGrid(0.0, 2.0 * kPi, steps))),
        verdict(check_cyclic(traj)),
        frame(build_w_frame(traj, verdict)) {}
};

const RotatingCase& rotating_case() {
  static const RotatingCase c(20000);
  return c;
}

TEST(UnitaryLog, InvertsSmallExponentialsProperty) {
  Gen gen(61);
  for (int i = 0; i < 50; ++i) {
    const Index d = gen.integer(2, 4);
    const Matrix h = gen.hermitian(d, 0.5);
    const Matrix log = unitary_log(expm_hermitian(h, 1.0));
    EXPECT_LE((log + kI * h).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((log + log.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(BuildWFrame, ColumnsAreTheSpinFrameRays) {
  const auto& c = rotating_case();
  const double alpha = alpha_tilt(c.p.mu_b, c.p.omega, c.p.theta);
  EXPECT_LE(c.frame.orthonormality_defect(), 1e-11);
  EXPECT_LE(c.frame.periodicity_defect(), 1e-6);
  for (std::size_t k = 0; k < c.frame.size(); k += 97) {
    const double t = c.frame.grid().node(k);
    EXPECT_NEAR(std::abs(inner_product(spin::rotating_w(c.p, alpha, Branch::plus, t), c.frame.vector(k, 0))), 1.0, 1e-8);
    EXPECT_NEAR(std::abs(inner_product(spin::rotating_w(c.p, alpha, Branch::minus, t), c.frame.vector(k, 1))), 1.0, 1e-8);
  }
  // First column differs from w_+ by a phase linear in t with an integer winding.
  const Complex p0 = inner_product(spin::rotating_w(c.p, alpha, Branch::plus, 0.0), c.frame.vector(0, 0));
  const Complex p1 = inner_product(spin::rotating_w(c.p, alpha, Branch::plus, 2.0 * kPi), c.frame.vector(c.frame.size() - 1, 0));
  EXPECT_NEAR(std::abs(p1 - p0), 0.0, 1e-6);
}

TEST(BuildWFrame, RequiresCyclicAndResolvedTrajectories) {
  const auto spec = HamiltonianSpec::rotating_spin(1.0, 1.0, kPi / 3.0);
  const auto open = propagate(spec, ComplexState{1.0, 0.0}, TimeGrid(0.0, 2.0 * kPi, 1000));
  EXPECT_EQ(error_code_of([&] { build_w_frame(open, check_cyclic(open)); }), ErrorCode::not_cyclic);
  // A fast static precession sampled with two steps per period.
  const StaticSpin p{1.0, kPi / 2.0};
  const auto coarse = propagate(HamiltonianSpec::static_spin(1.0), spin::static_w(p, Branch::plus, 0.0),
                                TimeGrid(0.0, 4.0 * kPi, 8));
  const auto v = check_cyclic(coarse);
  ASSERT_TRUE(v.is_cyclic);
  EXPECT_EQ(error_code_of([&] { build_w_frame(coarse, v); }), ErrorCode::under_resolved);
}

TEST(EffectiveHamiltonian, BuiltFrameIsDiagonal) {
  const auto& c = rotating_case();
  const auto heff = effective_hamiltonian(c.frame, c.spec);
  EXPECT_LE(heff.max_off_diagonal(), 1e-6);
  EXPECT_LE(heff.hermiticity_defect(), 1e-6);
  // Diagonal is constant and equals the closed-form energy modulo 2 pi / T.
  const double period = 2.0 * kPi;
  for (Index n = 0; n < 2; ++n) {
    const auto diag = heff.diagonal(n);
    const double e = spin::frame_energy(c.p, n == 0 ? Branch::plus : Branch::minus);
    for (std::size_t k = 0; k < diag.size(); k += 101) {
      EXPECT_LT(std::abs(std::remainder(diag[k] - e, 2.0 * kPi / period)), 1e-6) << "n " << n << " k " << k;
    }
  }
  for (const auto& m : heff.matrices) EXPECT_LE(std::abs(m.trace().imag()), 1e-6);
}

TEST(EffectiveHamiltonian, ClosedFormFramesAndWrongTilt) {
  const RotatingSpin p{1.0, 1.0, kPi / 3.0};
  const auto spec = HamiltonianSpec::rotating_spin(p.mu_b, p.omega, p.theta);
  const TimeGrid grid(0.0, 2.0 * kPi, 40000);
  const auto exact = effective_hamiltonian(spin::rotating_w_frame(p, alpha_tilt(p.mu_b, p.omega, p.theta), grid), spec);
  EXPECT_LE(exact.max_off_diagonal(), 1e-8);
  EXPECT_NEAR(exact.diagonal(0)[1234], spin::frame_energy(p, Branch::plus), 1e-8);
  EXPECT_NEAR(exact.diagonal(1)[1234], spin::frame_energy(p, Branch::minus), 1e-8);
  // Zero tilt is the instantaneous eigenframe: off-diagonal (omega / 2) sin(theta).
  const auto untilted = effective_hamiltonian(spin::rotating_w_frame(p, 0.0, grid), spec);
  EXPECT_NEAR(untilted.max_off_diagonal(), 0.5 * p.omega * std::sin(p.theta), 1e-8);

  const StaticSpin s{1.0, kPi / 3.0};
  const auto sframe = effective_hamiltonian(spin::static_w_frame(s, TimeGrid(0.0, kPi, 40000)),
                                            HamiltonianSpec::static_spin(s.mu_b, s.theta));
  EXPECT_LE(sframe.max_off_diagonal(), 1e-8);
  EXPECT_EQ(error_code_of([&] { effective_hamiltonian(spin::static_w_frame(s, TimeGrid(0.0, kPi, 10)),
                                                      HamiltonianSpec::custom({0.0, 4.0}, {Matrix::Identity(3, 3), Matrix::Identity(3, 3)})); }),
            ErrorCode::grid_mismatch);
}

TEST(Reconstruction, RecoversTheTrajectory) {
  const auto& c = rotating_case();
  const auto rebuilt = reconstruct_amplitude(c.frame, c.spec);
  double worst = 0.0;
  for (std::size_t k = 0; k < rebuilt.size(); ++k) {
    worst = std::max(worst, (rebuilt[k].amplitudes() - c.traj[k].amplitudes()).norm());
  }
  EXPECT_LE(worst, 1e-6);
}

TEST(Holonomy, StaticClosedFormTracks) {
  const StaticSpin s{1.0, kPi / 3.0};
  const auto frame = spin::static_w_frame(s, TimeGrid(0.0, kPi, 20000));
  // Second-order connection stencil: error ~ 1e-8 at this resolution.
  EXPECT_NEAR(frame_holonomy(frame, 0), kPi / 2.0, 1e-7);
  EXPECT_NEAR(frame_holonomy(frame, 1), -kPi / 2.0, 1e-7);
  EXPECT_EQ(error_code_of([&] { frame_holonomy(frame, 2); }), ErrorCode::invalid_argument);
}

TEST(Holonomy, ConsistencyTriangle) {
  // Frame holonomy, AA phase and the closed form agree pairwise.
  const auto& c = rotating_case();
  const double holonomy = frame_holonomy(c.frame, 0);
  const double aa = aa_phase(c.traj, c.verdict);
  const double exact = analytic_phase_report(c.spec, Branch::plus).aa_phase;
  EXPECT_LT(wrapped_distance(holonomy, aa), 1e-9);
  EXPECT_LT(wrapped_distance(aa, exact), 1e-6);
  EXPECT_LT(wrapped_distance(holonomy, exact), 1e-6);
}

TEST(Holonomy, HiddenGaugeCovarianceProperty) {
  Gen gen(62);
  const auto& c = rotating_case();
  const TimeGrid& g = c.frame.grid();
  const auto base = effective_hamiltonian(c.frame, c.spec);
  for (int i = 0; i < 5; ++i) {
    const std::vector<GaugeFunction> gauges{GaugeFunction::random(gen.engine(), g.t_start(), g.t_end(), true, 3),
                                            GaugeFunction::random(gen.engine(), g.t_start(), g.t_end(), true, 3)};
    const auto moved = rephase_frame(c.frame, gauges);
    for (Index n = 0; n < 2; ++n) {
      EXPECT_LT(wrapped_distance(frame_holonomy(moved, n), frame_holonomy(c.frame, n)), 1e-9);
    }
    const auto heff = effective_hamiltonian(moved, c.spec);
    EXPECT_LE(heff.max_off_diagonal(), 1e-6);
    // A rephasing e^{i g_n} adds g_n' to the diagonal.
    for (const std::size_t k : {std::size_t{1}, std::size_t{777}, std::size_t{19999}}) {
      for (Index n = 0; n < 2; ++n) {
        const double shift = gauges[static_cast<std::size_t>(n)].derivative(g.node(k));
        EXPECT_NEAR(heff.diagonal(n)[k], base.diagonal(n)[k] + shift, 1e-5);
      }
    }
  }
}

}  // namespace
}  // namespace geophase
