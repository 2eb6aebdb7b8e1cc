#pragma once

// Block splits of a perturbation in the eigenbasis (Hermitian case) or the
// singular basis (general case) of the unperturbed matrix.

#include <limits>
#include <sstream>
#include <utility>

#include "matperturb/matrix_core.hpp"

namespace matperturb {

/// Smallest eigenvalue of a Hermitian matrix; +inf for the empty matrix.
inline double min_eigenvalue(const Matrix& h) {
  if (h.size() == 0) return std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("factorization_failed", "Hermitian eigensolver did not converge");
  }
  return solver.eigenvalues()(0);
}

/// Perturbation written in the eigenbasis of A as
///
///   [[B, C], [C*, C*(diag(alpha_plus) + B)^{-1} C + D]]
///
/// with the range block first and the kernel block last. D is the Schur
/// complement; diag(alpha)+E_hat is PSD exactly when D is.
struct SchurSplit {
  RealVector alpha_plus;
  Matrix B;
  Matrix C;
  Matrix D;
  Index l = 0;
  Index m = 0;
};

namespace detail {

inline void check_split_shape(const RealVector& alpha, const Matrix& e_hat, Index l) {
  const Index n = alpha.size();
  if (e_hat.rows() != n || e_hat.cols() != n) {
    std::ostringstream os;
    os << "perturbation is " << e_hat.rows() << "x" << e_hat.cols() << " but spectrum has " << n << " entries";
    throw PreconditionError("shape_mismatch", os.str());
  }
  if (l < 0 || l > n) {
    std::ostringstream os;
    os << "block size l=" << l << " outside [0," << n << "]";
    throw PreconditionError("invalid_argument", os.str());
  }
  for (Index i = 0; i < l; ++i) {
    if (!(alpha(i) > 0.0)) {
      std::ostringstream os;
      os << "range eigenvalue alpha[" << i << "]=" << alpha(i) << " is not positive";
      throw PreconditionError("invalid_argument", os.str());
    }
  }
}

/// Cholesky factor of diag(alpha_plus) + B, gated on its smallest eigenvalue.
inline Eigen::LLT<Matrix> range_block_factor(const RealVector& alpha_plus, const Matrix& b, double psd_tol,
                                              double scale) {
  Matrix k = b;
  k.diagonal() += alpha_plus.cast<cplx>();
  const double lowest = min_eigenvalue(k);
  if (!(lowest > psd_tol * scale)) {
    std::ostringstream os;
    os << "diag(alpha_plus) + B is not positive definite (min eigenvalue " << lowest
       << "); perturbation too large for the Schur split";
    throw PreconditionError("perturbation_too_large", os.str());
  }
  Eigen::LLT<Matrix> llt(k);
  if (llt.info() != Eigen::Success) {
    throw PreconditionError("perturbation_too_large", "Cholesky of diag(alpha_plus) + B failed");
  }
  return llt;
}

}  // namespace detail

inline SchurSplit schur_split(const RealVector& alpha, const Hermitian& e_hat, Index l, const Tolerances& tol = {}) {
  const Matrix& e = e_hat.matrix();
  detail::check_split_shape(alpha, e, l);
  const Index n = alpha.size();
  SchurSplit split;
  split.l = l;
  split.m = n - l;
  split.alpha_plus = alpha.head(l);
  split.B = e.topLeftCorner(l, l);
  split.C = e.topRightCorner(l, n - l);
  const Matrix e22 = e.bottomRightCorner(n - l, n - l);
  if (l == 0 || n == l) {
    split.D = e22;
    return split;
  }
  const auto llt = detail::range_block_factor(split.alpha_plus, split.B, tol.psd, spectrum_scale(alpha));
  const Matrix d = e22 - split.C.adjoint() * llt.solve(split.C);
  split.D = 0.5 * (d + d.adjoint());
  return split;
}

inline Hermitian schur_reassemble(const SchurSplit& split, const Tolerances& tol = {}) {
  const Index l = split.l;
  const Index m = split.m;
  Matrix e(l + m, l + m);
  e.topLeftCorner(l, l) = split.B;
  e.topRightCorner(l, m) = split.C;
  e.bottomLeftCorner(m, l) = split.C.adjoint();
  if (l == 0 || m == 0) {
    e.bottomRightCorner(m, m) = split.D;
  } else {
    const auto llt =
        detail::range_block_factor(split.alpha_plus, split.B, tol.psd, spectrum_scale(split.alpha_plus));
    e.bottomRightCorner(m, m) = split.C.adjoint() * llt.solve(split.C) + split.D;
  }
  return Hermitian::symmetrized(e);
}

/// Both sides of "diag(alpha)+E_hat is PSD iff D is PSD", with the minimum
/// eigenvalues that decided each side.
struct SchurPsdCheck {
  bool full_psd = false;
  bool schur_psd = false;
  double full_min_eigenvalue = 0.0;
  double schur_min_eigenvalue = 0.0;
};

inline SchurPsdCheck psd_iff_schur_complement(const RealVector& alpha, const Hermitian& e_hat, Index l,
                                              const Tolerances& tol = {}) {
  const SchurSplit split = schur_split(alpha, e_hat, l, tol);
  Matrix full = e_hat.matrix();
  full.diagonal() += alpha.cast<cplx>();
  const double floor = -tol.psd * spectrum_scale(alpha);
  SchurPsdCheck out;
  out.full_min_eigenvalue = min_eigenvalue(0.5 * (full + full.adjoint()));
  out.schur_min_eigenvalue = min_eigenvalue(split.D);
  out.full_psd = out.full_min_eigenvalue >= floor;
  out.schur_psd = out.schur_min_eigenvalue >= floor;
  return out;
}

/// Blocks of Z_check = U* Z V split at the numerical rank of X.
struct ModulusSplit {
  RealVector sigma_plus;
  Matrix Z11;
  Matrix Z12;
  Matrix Z21;
  Matrix Z22;
  Index l = 0;
  Index m = 0;

  Matrix assembled() const {
    Matrix z(l + m, l + m);
    z.topLeftCorner(l, l) = Z11;
    z.topRightCorner(l, m) = Z12;
    z.bottomLeftCorner(m, l) = Z21;
    z.bottomRightCorner(m, m) = Z22;
    return z;
  }
};

inline ModulusSplit split_blocks(const Matrix& z_check, const RealVector& sigma, Index l) {
  const Index n = z_check.rows();
  ModulusSplit split;
  split.l = l;
  split.m = n - l;
  split.sigma_plus = sigma.head(l);
  split.Z11 = z_check.topLeftCorner(l, l);
  split.Z12 = z_check.topRightCorner(l, n - l);
  split.Z21 = z_check.bottomLeftCorner(n - l, l);
  split.Z22 = z_check.bottomRightCorner(n - l, n - l);
  return split;
}

inline std::pair<SvdDecomposition, ModulusSplit> modulus_split(const Matrix& x, const Matrix& z,
                                                               const Tolerances& tol = {}) {
  require_square(z, "modulus_split");
  if (x.rows() != z.rows()) throw PreconditionError("shape_mismatch", "modulus_split: X and Z differ in size");
  SvdDecomposition dec = svd(x);
  const Index l = numerical_rank(dec.sigma, tol.rank);
  const Matrix z_check = dec.U.adjoint() * z * dec.V;
  ModulusSplit split = split_blocks(z_check, dec.sigma, l);
  return {std::move(dec), std::move(split)};
}

}  // namespace matperturb
