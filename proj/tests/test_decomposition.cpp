#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace mpt;

namespace {

SchurSplit random_split(Gen& g, Index n, Index l, double d_shift) {
  SchurSplit s;
  s.l = l;
  s.m = n - l;
  s.alpha_plus = g.descending(l, l, 0.5, 2.0);
  Matrix b = g.hermitian(l);
  if (l > 0) b *= 0.2 / std::max(spectral_norm(b), 1e-300);
  s.B = b;
  s.C = g.complex(l, n - l) * 0.5;
  Matrix d = g.hermitian(n - l) * 0.3;
  d.diagonal().array() += d_shift;
  s.D = d;
  return s;
}

RealVector padded(const RealVector& alpha_plus, Index n) {
  RealVector a = RealVector::Zero(n);
  a.head(alpha_plus.size()) = alpha_plus;
  return a;
}

}  // namespace

TEST(SchurSplit, DecoupledBlocks) {
  const double d = 0.37;
  const SchurSplit s = schur_split(vec({1, 0}), herm(diag({0, d})), 1);
  EXPECT_EQ(s.B(0, 0), cplx(0));
  EXPECT_EQ(s.C(0, 0), cplx(0));
  EXPECT_EQ(s.D(0, 0), cplx(d));
}

TEST(SchurSplit, TwoByTwoClosedForm) {
  const double t = 0.01;
  const SchurSplit s = schur_split(vec({1, 0}), herm(real_matrix({{0, t}, {t, t}})), 1);
  EXPECT_EQ(s.B(0, 0), cplx(0));
  EXPECT_EQ(s.C(0, 0), cplx(t));
  EXPECT_NEAR(s.D(0, 0).real(), t - t * t, 1e-17);
  EXPECT_EQ(s.D(0, 0).imag(), 0.0);
}

TEST(SchurSplit, NoKernelIsIdentitySplit) {
  Gen g(1);
  const Matrix e = g.hermitian(4);
  const SchurSplit s = schur_split(vec({4, 3, 2, 1}), herm(e), 4);
  EXPECT_EQ(s.m, 0);
  EXPECT_EQ(s.D.rows(), 0);
  EXPECT_EQ(s.B, e);
  EXPECT_EQ(schur_reassemble(s).matrix(), e);
}

TEST(SchurSplit, ExamplesRoundtrip) {
  const double t = 0.01;
  for (const auto& [alpha, e, l] : {std::tuple{vec({1, 0}), diag({0, 0.37}), Index{1}},
                                    std::tuple{vec({1, 0}), real_matrix({{0, t}, {t, t}}), Index{1}},
                                    std::tuple{vec({2, 1}), real_matrix({{0.1, 0.2}, {0.2, -0.3}}), Index{2}}}) {
    const Hermitian back = schur_reassemble(schur_split(alpha, herm(e), l));
    EXPECT_LE(diff(back.matrix(), e), 1e-13 * (1 + spectral_norm(e)));
  }
}

TEST(SchurSplit, RandomRoundtrip500) {
  Gen g(2);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const Index n = g.integer(1, 12);
    const Index l = g.integer(0, n);
    const RealVector alpha = g.descending(n, l, 0.5, 2.0);
    Matrix e = g.hermitian(n);
    e *= 0.4 / spectral_norm(e);  // keeps diag(alpha_plus) + B definite
    const SchurSplit s = schur_split(alpha, herm(e), l);
    EXPECT_EQ(s.l + s.m, n);
    const double r = diff(schur_reassemble(s).matrix(), e) / (1 + spectral_norm(e));
    worst = std::max(worst, r);
  }
  EXPECT_LE(worst, 1e-13);
}

TEST(SchurSplit, DIsHermitian) {
  Gen g(3);
  const RealVector alpha = vec({2, 1.5, 0, 0, 0});
  Matrix e = g.hermitian(5) * 0.1;
  const SchurSplit s = schur_split(alpha, herm(e), 2);
  EXPECT_EQ(s.D, Matrix(s.D.adjoint()));
}

TEST(SchurSplit, RejectsIndefiniteRangeBlock) {
  try {
    (void)schur_split(vec({1, 0}), herm(real_matrix({{-1.5, 0.1}, {0.1, 0}})), 1);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_EQ(e.code(), "perturbation_too_large");
  }
}

TEST(SchurSplit, RejectsBadShapes) {
  EXPECT_THROW(schur_split(vec({1, 0}), herm(diag({1, 2, 3})), 1), PreconditionError);
  EXPECT_THROW(schur_split(vec({1, 0}), herm(diag({1, 2})), 3), PreconditionError);
  EXPECT_THROW(schur_split(vec({1, 0}), herm(diag({1, 2})), 2), PreconditionError);  // alpha[1] not positive
}

TEST(SchurReassemble, EmptyKernelReturnsB) {
  SchurSplit s;
  s.l = 2;
  s.m = 0;
  s.alpha_plus = vec({2, 1});
  s.B = real_matrix({{0.1, 0.2}, {0.2, 0.3}});
  s.C = Matrix(2, 0);
  s.D = Matrix(0, 0);
  EXPECT_EQ(schur_reassemble(s).matrix(), s.B);
}

TEST(SchurReassemble, RandomSixByThree) {
  Gen g(4);
  for (int trial = 0; trial < 20; ++trial) {
    const RealVector alpha = g.descending(6, 3, 0.5, 2.0);
    Matrix e = g.hermitian(6);
    e *= 0.3 / spectral_norm(e);
    const Hermitian back = schur_reassemble(schur_split(alpha, herm(e), 3));
    EXPECT_LE(diff(back.matrix(), e), 1e-13 * (1 + spectral_norm(e)));
  }
}

TEST(PsdIff, Examples) {
  const double t = 0.1;
  const SchurPsdCheck a = psd_iff_schur_complement(vec({1, 0}), herm(real_matrix({{0, t}, {t, t}})), 1);
  EXPECT_TRUE(a.full_psd);
  EXPECT_TRUE(a.schur_psd);
  EXPECT_NEAR(a.schur_min_eigenvalue, 0.09, 1e-15);
  // oracle: eigenvalues of [[1, t], [t, t]]
  const double tr = 1 + t, det = t - t * t;
  EXPECT_NEAR(a.full_min_eigenvalue, tr / 2 - std::sqrt(tr * tr / 4 - det), 1e-15);

  const SchurPsdCheck b = psd_iff_schur_complement(vec({1, 0}), herm(real_matrix({{0, t}, {t, t * t - 0.01}})), 1);
  EXPECT_FALSE(b.full_psd);
  EXPECT_FALSE(b.schur_psd);
  EXPECT_NEAR(b.schur_min_eigenvalue, -0.01, 1e-15);

  const SchurPsdCheck c = psd_iff_schur_complement(vec({1, 0}), herm(Matrix::Zero(2, 2)), 1);
  EXPECT_TRUE(c.full_psd);
  EXPECT_TRUE(c.schur_psd);
}

TEST(PsdIff, Equivalence500) {
  Gen g(5);
  const double band = 10 * Tolerances{}.psd;
  int checked = 0, positives = 0, negatives = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Index n = g.integer(2, 8);
    const Index l = g.integer(1, n - 1);
    const SchurSplit s = random_split(g, n, l, g.uniform(-0.4, 0.6));
    const RealVector alpha = padded(s.alpha_plus, n);
    const Hermitian e = schur_reassemble(s);
    const SchurPsdCheck r = psd_iff_schur_complement(alpha, e, l);
    const double scale = spectrum_scale(alpha);
    if (std::abs(r.full_min_eigenvalue) < band * scale || std::abs(r.schur_min_eigenvalue) < band * scale) continue;
    ++checked;
    (r.full_psd ? positives : negatives) += 1;
    EXPECT_EQ(r.full_psd, r.schur_psd) << "trial " << trial;
  }
  EXPECT_GT(checked, 450);
  EXPECT_GT(positives, 50);
  EXPECT_GT(negatives, 50);
}

TEST(ModulusSplit, ZeroX) {
  Gen g(6);
  const Matrix z = g.complex(3, 3);
  const auto [dec, s] = modulus_split(Matrix::Zero(3, 3), z);
  EXPECT_EQ(s.l, 0);
  EXPECT_EQ(s.m, 3);
  EXPECT_EQ(dec.U, Matrix::Identity(3, 3));
  EXPECT_EQ(s.Z22, z);
}

TEST(ModulusSplit, NonsingularX) {
  Gen g(7);
  const Matrix x = g.complex(4, 4);
  const Matrix z = g.complex(4, 4);
  const auto [dec, s] = modulus_split(x, z);
  EXPECT_EQ(s.m, 0);
  EXPECT_EQ(s.Z11, Matrix(dec.U.adjoint() * z * dec.V));
}

TEST(ModulusSplit, PicksLowerLeft) {
  const auto [dec, s] = modulus_split(diag({2, 0}), real_matrix({{0, 0}, {1, 0}}));
  EXPECT_EQ(s.l, 1);
  EXPECT_EQ(s.Z21(0, 0), cplx(1));
  EXPECT_EQ(s.Z11(0, 0), cplx(0));
  EXPECT_EQ(s.Z12(0, 0), cplx(0));
  EXPECT_EQ(s.Z22(0, 0), cplx(0));
}

TEST(ModulusSplit, BlocksReassembleExactly) {
  Gen g(8);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = g.integer(1, 8);
    const Index r = g.integer(0, n);
    const Matrix x = g.complex(n, r) * g.complex(r, n);
    const Matrix z = g.complex(n, n);
    const auto [dec, s] = modulus_split(x, z);
    EXPECT_EQ(s.l + s.m, n);
    EXPECT_EQ(s.assembled(), Matrix(dec.U.adjoint() * z * dec.V));
  }
}

TEST(ModulusSplit, ShapeMismatch) {
  EXPECT_THROW(modulus_split(Matrix::Zero(2, 2), Matrix::Zero(3, 3)), PreconditionError);
}
