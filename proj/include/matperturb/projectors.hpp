#pragma once

// Spectral projectors of diag(alpha) + E_tilde onto the perturbed range and
// kernel clusters, exact and to first order.

#include <sstream>

#include "matperturb/matrix_core.hpp"

namespace matperturb {

/// P1 projects onto the cluster emanating from the nonzero eigenvalues, P0 onto
/// the cluster emanating from 0.
struct ProjectorPair {
  Hermitian P0;
  Hermitian P1;
};

/// Exact projectors, realized as sums of eigenprojections of diag(alpha)+E_tilde.
///
/// Rejects the input when the l-th and (l+1)-th perturbed eigenvalues are
/// closer than a quarter of the unperturbed gap alpha[l-1].
inline ProjectorPair spectral_projectors(const RealVector& alpha, const Hermitian& e_tilde, Index l) {
  const Index n = alpha.size();
  if (e_tilde.dim() != n) throw PreconditionError("shape_mismatch", "spectral_projectors: size mismatch");
  if (l < 0 || l > n) throw PreconditionError("invalid_argument", "spectral_projectors: l outside [0, n]");

  Matrix m = e_tilde.matrix();
  m.diagonal() += alpha.cast<cplx>();
  const SpectralDecomposition dec = eigh(Hermitian::symmetrized(m));
  if (l > 0 && l < n) {
    const double gap = alpha(l - 1);
    const double separation = dec.alpha(l - 1) - dec.alpha(l);
    if (!(gap > 0.0) || separation < gap / 4.0) {
      std::ostringstream os;
      os << "perturbed spectrum does not separate: eigenvalues " << l - 1 << " and " << l << " are " << separation
         << " apart, need at least " << gap / 4.0;
      throw PreconditionError("spectral_separation", os.str());
    }
  }
  const Matrix range = dec.U.leftCols(l);
  const Matrix p1 = range * range.adjoint();
  const Matrix p0 = Matrix::Identity(n, n) - p1;
  return {Hermitian::symmetrized(p0), Hermitian::symmetrized(p1)};
}

/// P1 ~ [[I, S^{-1}C], [C* S^{-1}, 0]] and P0 = I - P1 with S = diag(alpha_plus).
/// These sum to I exactly but are idempotent only up to O(||C||^2).
inline ProjectorPair projector_first_order(const RealVector& alpha_plus, const Matrix& c_block) {
  const Index l = alpha_plus.size();
  if (c_block.rows() != l) throw PreconditionError("shape_mismatch", "projector_first_order: C must have l rows");
  for (Index i = 0; i < l; ++i) {
    if (!(alpha_plus(i) > 0.0)) throw PreconditionError("invalid_argument", "projector_first_order: alpha_plus must be positive");
  }
  const Index m = c_block.cols();
  const Index n = l + m;
  const Matrix scaled = alpha_plus.cwiseInverse().cast<cplx>().asDiagonal() * c_block;
  Matrix p1 = Matrix::Zero(n, n);
  p1.topLeftCorner(l, l).setIdentity();
  p1.topRightCorner(l, m) = scaled;
  p1.bottomLeftCorner(m, l) = scaled.adjoint();
  Matrix p0 = -p1;
  p0.diagonal().array() += 1.0;
  return {Hermitian::symmetrized(p0), Hermitian::symmetrized(p1)};
}

}  // namespace matperturb
