#include <gtest/gtest.h>

#include "geophase/hamiltonian.hpp"
#include "geophase/state.hpp"
#include "support/test_support.hpp"

namespace geophase {
namespace {

using namespace testing;

TEST(InnerProduct, BasisCases) {
  const ComplexState up{1.0, 0.0};
  const ComplexState down{0.0, 1.0};
  EXPECT_EQ(inner_product(up, up), Complex(1.0, 0.0));
  EXPECT_EQ(inner_product(up, down), Complex(0.0, 0.0));
}

TEST(InnerProduct, SpinBasisIsOrthonormal) {
  const auto vp = spin::basis_vector(kPi / 3.0, 0.0, Branch::plus);
  const auto vm = spin::basis_vector(kPi / 3.0, 0.0, Branch::minus);
  EXPECT_NEAR(std::abs(inner_product(vp, vm)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(inner_product(vp, vp) - 1.0), 0.0, 1e-15);
}

TEST(InnerProduct, ConjugateSymmetryProperty) {
  Gen gen(11);
  for (int i = 0; i < 200; ++i) {
    const Index d = gen.integer(2, 5);
    const auto a = gen.state(d);
    const auto b = gen.state(d);
    EXPECT_NEAR(std::abs(inner_product(a, b) - std::conj(inner_product(b, a))), 0.0, 1e-15);
  }
}

TEST(InnerProduct, DimensionMismatch) {
  const ComplexState a{1.0, 0.0};
  const ComplexState b{1.0, 0.0, 0.0};
  EXPECT_EQ(error_code_of([&] { inner_product(a, b); }), ErrorCode::dimension_mismatch);
}

TEST(ComplexState, NormalizesAndRejectsBadInput) {
  Gen gen(3);
  for (int i = 0; i < 100; ++i) {
    const ComplexState s(Vector(gen.vector(gen.integer(2, 6)) * gen.uniform(1e-3, 1e3)));
    EXPECT_NEAR(s.norm(), 1.0, 1e-12);
  }
  EXPECT_EQ(error_code_of([] { ComplexState(Vector::Zero(2)); }), ErrorCode::invalid_argument);
  EXPECT_EQ(error_code_of([] { ComplexState(Vector::Ones(1)); }), ErrorCode::invalid_argument);
  EXPECT_EQ(error_code_of([] { ComplexState::from_unitary_image(vec({1.0, 1e-4})); }),
            ErrorCode::invalid_argument);
}

TEST(BlochVector, NorthPoleAndSpinBasis) {
  const auto north = bloch_vector(ComplexState{1.0, 0.0});
  EXPECT_DOUBLE_EQ(north[0], 0.0);
  EXPECT_DOUBLE_EQ(north[1], 0.0);
  EXPECT_DOUBLE_EQ(north[2], 1.0);

  Gen gen(5);
  for (int i = 0; i < 100; ++i) {
    const double theta = gen.uniform(0.0, kPi);
    const double phi = gen.phase();
    const double n[3] = {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
    const auto bp = bloch_vector(spin::basis_vector(theta, phi, Branch::plus));
    const auto bm = bloch_vector(spin::basis_vector(theta, phi, Branch::minus));
    for (int j = 0; j < 3; ++j) {
      EXPECT_NEAR(bp[j], n[j], 1e-14);
      EXPECT_NEAR(bm[j], -n[j], 1e-14);
    }
  }
}

TEST(BlochVector, UnitNormAndPhaseInvarianceProperty) {
  Gen gen(7);
  for (int i = 0; i < 500; ++i) {
    const auto s = gen.state(2);
    const auto b = bloch_vector(s);
    const auto c = bloch_vector(s.rephased(gen.phase()));
    EXPECT_NEAR(std::hypot(b[0], b[1], b[2]), 1.0, 1e-10);
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(b[j], c[j], 1e-15);
  }
}

TEST(BlochVector, SpinHalfOnly) {
  EXPECT_EQ(error_code_of([] { bloch_vector(ComplexState{1.0, 0.0, 0.0}); }), ErrorCode::spin_half_only);
}

TEST(ArgOverlap, Examples) {
  const ComplexState a{1.0, 0.0};
  EXPECT_NEAR(arg_overlap(a, ComplexState{std::polar(1.0, kPi / 4.0), 0.0}), kPi / 4.0, 1e-15);
  EXPECT_EQ(arg_overlap(a, a), 0.0);
  const Complex z = Complex(1.0, 1.0) / std::sqrt(2.0);
  EXPECT_NEAR(arg_overlap(a, ComplexState{z, 0.0}), kPi / 4.0, 1e-15);
}

TEST(ArgOverlap, NearOrthogonalIsUndefined) {
  EXPECT_EQ(error_code_of([] { arg_overlap(ComplexState{1.0, 0.0}, ComplexState{1e-13, 1.0}); }),
            ErrorCode::undefined_phase);
}

TEST(ArgOverlap, PhaseCovarianceProperty) {
  Gen gen(13);
  for (int i = 0; i < 300; ++i) {
    const Index d = gen.integer(2, 4);
    const auto a = gen.state(d);
    const auto b = gen.state(d);
    const double mu = gen.phase();
    const double nu = gen.phase();
    const double lhs = arg_overlap(a.rephased(mu), b.rephased(nu));
    EXPECT_LT(wrapped_distance(lhs, arg_overlap(a, b) + nu - mu), 1e-12);
  }
}

TEST(WrapPhase, PrincipalRange) {
  EXPECT_DOUBLE_EQ(wrap_phase(-kPi), kPi);
  EXPECT_DOUBLE_EQ(wrap_phase(kPi), kPi);
  EXPECT_NEAR(wrap_phase(3.0 * kPi), kPi, 1e-15);
  EXPECT_NEAR(wrap_phase(kRefBetaUnwrapped), kRefBetaWrapped, 1e-15);
  Gen gen(17);
  for (int i = 0; i < 1000; ++i) {
    const double x = gen.uniform(-100.0, 100.0);
    const double w = wrap_phase(x);
    EXPECT_GT(w, -kPi);
    EXPECT_LE(w, kPi);
    EXPECT_NEAR(std::remainder(x - w, 2.0 * kPi), 0.0, 1e-12);
  }
}

TEST(TimeGrid, UniformNodesAndValidation) {
  const TimeGrid g(0.5, 2.5, 7);
  EXPECT_EQ(g.size(), 8u);
  EXPECT_DOUBLE_EQ(g.node(0), 0.5);
  EXPECT_DOUBLE_EQ(g.node(7), 2.5);
  for (std::size_t k = 1; k < g.size(); ++k) {
    EXPECT_NEAR(g.node(k) - g.node(k - 1), g.dt(), 1e-14 * g.duration());
  }
  EXPECT_EQ(error_code_of([] { TimeGrid(1.0, 1.0, 10); }), ErrorCode::invalid_argument);
  EXPECT_EQ(error_code_of([] { TimeGrid(0.0, 1.0, 1); }), ErrorCode::invalid_argument);
}

TEST(Trajectory, StateCountMustMatchGrid) {
  const TimeGrid g(0.0, 1.0, 2);
  std::vector<ComplexState> two(2, ComplexState{1.0, 0.0});
  EXPECT_EQ(error_code_of([&] { Trajectory(g, two); }), ErrorCode::grid_mismatch);
  std::vector<ComplexState> mixed{ComplexState{1.0, 0.0}, ComplexState{1.0, 0.0}, ComplexState{1.0, 0.0, 0.0}};
  EXPECT_EQ(error_code_of([&] { Trajectory(g, mixed); }), ErrorCode::dimension_mismatch);
}

}  // namespace
}  // namespace geophase
