#pragma once

// Dense complex matrix primitives: Hermitian eigendecomposition, SVD,
// functional calculus, norms and the Hadamard product. These are the exact
// reference against which every first-order approximation is measured.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

#include "matperturb/errors.hpp"

namespace matperturb {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Numerical thresholds shared by all modules. Every field is overridable and
/// every one of them is echoed in CLI reports.
struct Tolerances {
  double hermitian = 1e-10;
  double unitary = 1e-10;
  double recon = 1e-10;
  double psd = 1e-10;
  double rank = 1e-8;
  double pair = 1e-12;
};

/// Scale used for the relative eigenvalue thresholds: max(1, max|alpha|).
inline double spectrum_scale(const RealVector& alpha) {
  return alpha.size() == 0 ? 1.0 : std::max(1.0, alpha.cwiseAbs().maxCoeff());
}

template <class Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      const auto v = m(i, j);
      if (!std::isfinite(std::real(v)) || !std::isfinite(std::imag(v))) {
        std::ostringstream os;
        os << what << ": non-finite entry at (" << i << "," << j << ")";
        throw PreconditionError("non_finite", os.str());
      }
    }
  }
}

inline void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << ": expected a square matrix, got " << m.rows() << "x" << m.cols();
    throw PreconditionError("shape_mismatch", os.str());
  }
}

/// Largest |M(i,j) - conj(M(j,i))| together with the pair attaining it.
struct HermitianDefect {
  double value = 0.0;
  Index row = 0;
  Index col = 0;
};

inline HermitianDefect hermitian_defect(const Matrix& m) {
  HermitianDefect worst;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = i; j < m.cols(); ++j) {
      const double d = std::abs(m(i, j) - std::conj(m(j, i)));
      if (d > worst.value) worst = {d, i, j};
    }
  }
  return worst;
}

/// A square complex matrix known to be Hermitian within tolerance.
class Hermitian {
 public:
  Hermitian() = default;

  /// Validates `m` and keeps it unchanged.
  static Hermitian checked(Matrix m, double tol = Tolerances{}.hermitian) {
    require_square(m, "Hermitian");
    require_finite(m, "Hermitian");
    const HermitianDefect d = hermitian_defect(m);
    const double bound = tol * (1.0 + (m.size() ? m.cwiseAbs().maxCoeff() : 0.0));
    if (d.value > bound) {
      std::ostringstream os;
      os << "matrix is not Hermitian: |M(" << d.row << "," << d.col << ") - conj(M(" << d.col << ","
         << d.row << "))| = " << d.value << " exceeds " << bound;
      throw PreconditionError("not_hermitian", os.str());
    }
    return Hermitian(std::move(m));
  }

  /// Returns (m + m*)/2. For quantities that are Hermitian in exact arithmetic.
  static Hermitian symmetrized(const Matrix& m) {
    require_square(m, "Hermitian");
    return Hermitian(Matrix(0.5 * (m + m.adjoint())));
  }

  const Matrix& matrix() const noexcept { return m_; }
  operator const Matrix&() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }

 private:
  explicit Hermitian(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

/// A = U diag(alpha) U*, eigenvalues sorted descending so that a kernel sits
/// in the trailing positions.
struct SpectralDecomposition {
  Matrix U;
  RealVector alpha;

  Index dim() const noexcept { return alpha.size(); }
};

/// X = U diag(sigma) V*, sigma descending and nonnegative.
struct SvdDecomposition {
  Matrix U;
  RealVector sigma;
  Matrix V;

  Index dim() const noexcept { return sigma.size(); }
};

/// U diag(d) U*.
template <class Vec>
Matrix conjugate_diagonal(const Matrix& U, const Vec& d) {
  Matrix scaled = U;
  for (Index j = 0; j < U.cols(); ++j) scaled.col(j) *= d(j);
  return scaled * U.adjoint();
}

inline SpectralDecomposition eigh(const Hermitian& a) {
  const Index n = a.dim();
  if (n == 0) return {Matrix(0, 0), RealVector(0)};
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw NumericalError("factorization_failed", "Hermitian eigensolver did not converge");
  }
  SpectralDecomposition dec;
  dec.alpha = solver.eigenvalues().reverse();
  dec.U = solver.eigenvectors().rowwise().reverse();
  return dec;
}

inline SvdDecomposition svd(const Matrix& x) {
  require_square(x, "svd");
  require_finite(x, "svd");
  const Index n = x.rows();
  if (n == 0) return {Matrix(0, 0), RealVector(0), Matrix(0, 0)};
  Eigen::JacobiSVD<Matrix> solver(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("factorization_failed", "Jacobi SVD did not converge");
  }
  return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

/// f(A) = U diag(f(alpha)) U*. Rejects f that is non-finite at an eigenvalue.
template <class F>
Hermitian apply_function(const SpectralDecomposition& dec, F&& f) {
  RealVector values(dec.dim());
  for (Index i = 0; i < dec.dim(); ++i) {
    values(i) = f(dec.alpha(i));
    if (!std::isfinite(values(i))) {
      std::ostringstream os;
      os.precision(17);
      os << "function is undefined or non-finite at eigenvalue " << dec.alpha(i);
      throw PreconditionError("undefined_function", os.str());
    }
  }
  return Hermitian::symmetrized(conjugate_diagonal(dec.U, values));
}

/// Eigenvalues with entries in [-psd_tol*scale, 0) clipped to zero; anything
/// more negative is rejected.
inline RealVector clipped_psd_spectrum(const RealVector& alpha, double psd_tol) {
  const double floor = -psd_tol * spectrum_scale(alpha);
  RealVector out = alpha;
  for (Index i = 0; i < alpha.size(); ++i) {
    if (alpha(i) < floor) {
      std::ostringstream os;
      os.precision(17);
      os << "matrix is not positive semi-definite: eigenvalue " << alpha(i) << " below " << floor;
      throw PreconditionError("not_psd", os.str());
    }
    out(i) = std::max(alpha(i), 0.0);
  }
  return out;
}

inline Hermitian matrix_power(const SpectralDecomposition& dec, double s, const Tolerances& tol = {}) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw PreconditionError("invalid_argument", "matrix_power: exponent must be positive");
  }
  const RealVector clipped = clipped_psd_spectrum(dec.alpha, tol.psd);
  RealVector powered(clipped.size());
  for (Index i = 0; i < clipped.size(); ++i) powered(i) = clipped(i) == 0.0 ? 0.0 : std::pow(clipped(i), s);
  return Hermitian::symmetrized(conjugate_diagonal(dec.U, powered));
}

inline Hermitian matrix_power(const Hermitian& a, double s, const Tolerances& tol = {}) {
  return matrix_power(eigh(a), s, tol);
}

/// |X| = sqrt(X* X), evaluated as V diag(sigma) V*.
inline Hermitian matrix_modulus(const Matrix& x) {
  const SvdDecomposition d = svd(x);
  return Hermitian::symmetrized(conjugate_diagonal(d.V, d.sigma));
}

template <class A, class B>
auto hadamard(const Eigen::MatrixBase<A>& m, const Eigen::MatrixBase<B>& n) {
  if (m.rows() != n.rows() || m.cols() != n.cols()) {
    std::ostringstream os;
    os << "hadamard: shape mismatch " << m.rows() << "x" << m.cols() << " vs " << n.rows() << "x" << n.cols();
    throw PreconditionError("shape_mismatch", os.str());
  }
  using Scalar = typename Eigen::ScalarBinaryOpTraits<typename A::Scalar, typename B::Scalar>::ReturnType;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(m.rows(), m.cols());
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) out(i, j) = Scalar(m(i, j)) * Scalar(n(i, j));
  return out;
}

template <class Derived>
double spectral_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  using Plain = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::JacobiSVD<Plain> solver{Plain(m)};
  return solver.singularValues()(0);
}

template <class Derived>
double frobenius_norm(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.norm();
}

/// Number of eigenvalues above rank_tol * max(1, alpha_1). For descending
/// input these are the leading entries; the remainder is the kernel.
inline Index numerical_rank(const RealVector& alpha, double rank_tol = Tolerances{}.rank) {
  if (alpha.size() == 0) return 0;
  const double threshold = rank_tol * std::max(1.0, alpha.maxCoeff());
  Index l = 0;
  for (Index i = 0; i < alpha.size(); ++i)
    if (alpha(i) > threshold) ++l;
  return l;
}

}  // namespace matperturb
