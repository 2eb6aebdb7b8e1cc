#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace mpt;

TEST(SpectralProjectors, UnperturbedBlocks) {
  const ProjectorPair p = spectral_projectors(vec({3, 1, 0, 0}), herm(Matrix::Zero(4, 4)), 2);
  EXPECT_LE(diff(p.P1.matrix(), diag({1, 1, 0, 0})), 1e-15);
  EXPECT_LE(diff(p.P0.matrix(), diag({0, 0, 1, 1})), 1e-15);
}

TEST(SpectralProjectors, Scalar) {
  const ProjectorPair p = spectral_projectors(vec({1}), herm(diag({0.2})), 1);
  EXPECT_LE(diff(p.P1.matrix(), diag({1})), 1e-15);
  EXPECT_LE(diff(p.P0.matrix(), diag({0})), 1e-15);
}

TEST(SpectralProjectors, TraceEqualsRank) {
  Gen g(1);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix e = g.hermitian(4);
    e *= 0.1 / spectral_norm(e);
    const ProjectorPair p = spectral_projectors(vec({2, 1, 0, 0}), herm(e), 2);
    EXPECT_NEAR(p.P1.matrix().trace().real(), 2.0, 1e-12);
  }
}

TEST(SpectralProjectors, Invariants200) {
  Gen g(2);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = g.integer(1, 10);
    const Index l = g.integer(0, n);
    const RealVector alpha = g.descending(n, l, 0.5, 2.0);
    Matrix e = g.hermitian(n);
    e *= g.uniform(0.0, 0.2) / spectral_norm(e);
    const ProjectorPair p = spectral_projectors(alpha, herm(e), l);
    const Matrix& p0 = p.P0.matrix();
    const Matrix& p1 = p.P1.matrix();
    EXPECT_LE(diff(p0 + p1, Matrix::Identity(n, n)), 1e-12);
    EXPECT_LE(diff(p0 * p0, p0), 1e-10);
    EXPECT_LE(diff(p1 * p1, p1), 1e-10);
    EXPECT_LE(hermitian_defect(p0).value, 1e-10);
    EXPECT_LE(hermitian_defect(p1).value, 1e-10);
    EXPECT_NEAR(p1.trace().real(), static_cast<double>(l), 1e-10);
  }
}

TEST(SpectralProjectors, RejectsMissingSeparation) {
  try {
    (void)spectral_projectors(vec({1, 0}), herm(diag({-0.45, 0.45})), 1);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_EQ(e.code(), "spectral_separation");
  }
  EXPECT_THROW(spectral_projectors(vec({1, 0}), herm(diag({0, 0})), 3), PreconditionError);
}

TEST(ProjectorFirstOrder, ZeroCouplingIsExact) {
  const ProjectorPair p = projector_first_order(vec({2, 1}), Matrix::Zero(2, 3));
  const ProjectorPair q = spectral_projectors(vec({2, 1, 0, 0, 0}), herm(Matrix::Zero(5, 5)), 2);
  EXPECT_LE(diff(p.P1.matrix(), q.P1.matrix()), 0.0);
  EXPECT_LE(diff(p.P0.matrix(), q.P0.matrix()), 0.0);
}

TEST(ProjectorFirstOrder, ScalarFormula) {
  const cplx c(0.1, -0.2);
  Matrix cb(1, 1);
  cb(0, 0) = c;
  const ProjectorPair p = projector_first_order(vec({1}), cb);
  Matrix expect(2, 2);
  expect << 1.0, c, std::conj(c), 0.0;
  EXPECT_EQ(p.P1.matrix(), expect);
}

TEST(ProjectorFirstOrder, SumIsIdentityExactly) {
  Gen g(3);
  for (int trial = 0; trial < 20; ++trial) {
    const ProjectorPair p = projector_first_order(g.descending(3, 3, 0.5, 2), g.complex(3, 4));
    EXPECT_EQ(Matrix(p.P0.matrix() + p.P1.matrix()), Matrix::Identity(7, 7));
  }
}

TEST(ProjectorFirstOrder, RejectsZeroEigenvalue) {
  EXPECT_THROW(projector_first_order(vec({1, 0}), Matrix::Zero(2, 1)), PreconditionError);
  EXPECT_THROW(projector_first_order(vec({1}), Matrix::Zero(2, 1)), PreconditionError);
}
