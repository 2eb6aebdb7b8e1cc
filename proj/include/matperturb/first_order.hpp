#pragma once

// First-order approximations of f(A+E), (A+E)^s and |X+Z|.
//
// For nonsingular A the correction is the linear Daleckii-Krein term
// U([f, alpha] o U*EU)U*. When A has a kernel and f = t^s with s < 1 the map
// is not differentiable; the correction then uses the Schur complement D of
// the perturbation and is non-linear only through the D^s block.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "matperturb/decomposition.hpp"
#include "matperturb/loewner.hpp"
#include "matperturb/matrix_core.hpp"

namespace matperturb {

/// Error exponent r in ||exact - approximation|| = O(||E||^r). Empty when no
/// order is known (t^(1/p) with p >= 3).
struct ExpectedOrder {
  std::optional<double> value;

  bool guaranteed() const noexcept { return value.has_value(); }
  std::string label() const {
    if (!value) return "unguaranteed";
    std::ostringstream os;
    os.precision(17);
    os << *value;
    return os.str();
  }
};

/// r = min(1 + 1/p, 3/p) for 1 < p < 3.
inline ExpectedOrder root_order(double p) {
  if (p > 1.0 && p < 3.0) return {std::min(1.0 + 1.0 / p, 3.0 / p)};
  return {};
}

struct FirstOrderResult {
  Hermitian approximation;
  Hermitian first_order_term;
};

enum class PowerKind { root_p, power_s };

struct PowerApproxResult {
  Hermitian approximation;
  Hermitian first_order_term;
  SchurSplit split;
  PowerKind kind = PowerKind::root_p;
  double parameter = 0.0;  ///< p for root_p, s for power_s
  ExpectedOrder expected_order;
};

struct ModulusApproxResult {
  Hermitian approximation;
  Hermitian first_order_term;
  ModulusSplit split;
  ExpectedOrder expected_order{1.5};
};

namespace detail {

inline Hermitian in_basis(const Matrix& u, const Matrix& e, const char* what) {
  if (e.rows() != u.rows() || e.cols() != u.rows()) {
    std::ostringstream os;
    os << what << ": perturbation is " << e.rows() << "x" << e.cols() << ", expected " << u.rows() << "x"
       << u.rows();
    throw PreconditionError("shape_mismatch", os.str());
  }
  return Hermitian::symmetrized(u.adjoint() * e * u);
}

inline Hermitian conjugate_back(const Matrix& u, const Matrix& m) { return Hermitian::symmetrized(u * m * u.adjoint()); }

inline Hermitian sum(const Hermitian& a, const Hermitian& b) {
  return Hermitian::symmetrized(a.matrix() + b.matrix());
}

/// Block [[B, C], [C*, K]].
inline Matrix block_hermitian(const Matrix& b, const Matrix& c, const Matrix& k) {
  const Index l = b.rows();
  const Index m = k.rows();
  Matrix out(l + m, l + m);
  out.topLeftCorner(l, l) = b;
  out.topRightCorner(l, m) = c;
  out.bottomLeftCorner(m, l) = c.adjoint();
  out.bottomRightCorner(m, m) = k;
  return out;
}

/// D^s for a PSD block whose negative eigenvalues were already vetted.
inline Matrix psd_block_power(const Matrix& d, double s) {
  if (d.size() == 0) return d;
  const SpectralDecomposition dec = eigh(Hermitian::symmetrized(d));
  RealVector powered(dec.dim());
  for (Index i = 0; i < dec.dim(); ++i) powered(i) = dec.alpha(i) > 0.0 ? std::pow(dec.alpha(i), s) : 0.0;
  return conjugate_diagonal(dec.U, powered);
}

inline PowerApproxResult power_assembly(const SpectralDecomposition& dec, const Hermitian& e, double s,
                                        const Tolerances& tol) {
  RealVector alpha = clipped_psd_spectrum(dec.alpha, tol.psd);
  const Index n = alpha.size();
  const Index l = numerical_rank(alpha, tol.rank);
  alpha.tail(n - l).setZero();

  const Hermitian e_hat = in_basis(dec.U, e, "power_approx");
  const SchurPsdCheck psd = psd_iff_schur_complement(alpha, e_hat, l, tol);
  if (!psd.full_psd || !psd.schur_psd) {
    std::ostringstream os;
    os << "A+E is not positive semi-definite (min eigenvalue " << psd.full_min_eigenvalue
       << ", Schur complement min eigenvalue " << psd.schur_min_eigenvalue << ")";
    throw PreconditionError("not_psd", os.str());
  }

  PowerApproxResult out;
  out.split = schur_split(alpha, e_hat, l, tol);
  const Matrix blocks = block_hermitian(out.split.B, out.split.C, psd_block_power(out.split.D, s));
  const DividedDifferenceMatrix w = power_dd_one(s, alpha, tol.pair);

  RealVector powered(n);
  for (Index i = 0; i < n; ++i) powered(i) = alpha(i) > 0.0 ? std::pow(alpha(i), s) : 0.0;
  const Hermitian base = Hermitian::symmetrized(conjugate_diagonal(dec.U, powered));
  out.first_order_term = conjugate_back(dec.U, hadamard(w.entries, blocks));
  out.approximation = sum(base, out.first_order_term);
  return out;
}

}  // namespace detail

/// U([f, alpha] o E_hat)U* for a precomputed divided-difference matrix.
inline Hermitian dk_correction(const SpectralDecomposition& dec, const Hermitian& e, const DividedDifferenceMatrix& w) {
  const Hermitian e_hat = detail::in_basis(dec.U, e, "dk_correction");
  return detail::conjugate_back(dec.U, hadamard(w.entries, e_hat.matrix()));
}

/// f(A+E) ~ f(A) + U([f, alpha] o U*EU)U*, error O(||E||^2) for f in C^2.
template <class F, class FPrime>
FirstOrderResult dk_approx(const SpectralDecomposition& dec, const Hermitian& e, F&& f, FPrime&& f_prime,
                           const Tolerances& tol = {}) {
  const DividedDifferenceMatrix w = divided_difference(f, f_prime, dec.alpha, tol.pair);
  FirstOrderResult out;
  out.first_order_term = dk_correction(dec, e, w);
  out.approximation = detail::sum(apply_function(dec, f), out.first_order_term);
  return out;
}

/// dk_approx for f(t) = t^s on a PSD spectrum. For s < 1 a numerical kernel is
/// rejected since t^s is not differentiable at 0; power_approx covers that case.
inline FirstOrderResult dk_approx_power(const SpectralDecomposition& dec, const Hermitian& e, double s,
                                        const Tolerances& tol = {}) {
  if (!(s > 0.0)) throw PreconditionError("invalid_argument", "dk_approx_power: exponent must be positive");
  const RealVector alpha = clipped_psd_spectrum(dec.alpha, tol.psd);
  if (s < 1.0 && numerical_rank(alpha, tol.rank) < alpha.size()) {
    throw PreconditionError("kernel_present",
                            "A has a numerically zero eigenvalue; t^s is not differentiable there, use power mode");
  }
  SpectralDecomposition clipped{dec.U, alpha};
  const auto f = [s](double t) { return t > 0.0 ? std::pow(t, s) : 0.0; };
  if (s == 0.5) {
    FirstOrderResult out;
    out.first_order_term = dk_correction(clipped, e, sqrt_divided_difference(alpha));
    out.approximation = detail::sum(apply_function(clipped, f), out.first_order_term);
    return out;
  }
  const auto f_prime = [s](double t) { return s * std::pow(t, s - 1.0); };
  return dk_approx(clipped, e, f, f_prime, tol);
}

/// (A+E)^(1/p) for PSD A (possibly singular) and PSD A+E, 1 < p.
///
/// The error is O(||E||^r) with r = min(1 + 1/p, 3/p) when p < 3. For p >= 3
/// the same formula is evaluated but no order is claimed.
inline PowerApproxResult power_approx(const SpectralDecomposition& dec, const Hermitian& e, double p,
                                      const Tolerances& tol = {}) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw PreconditionError("invalid_argument", "power_approx: p must exceed 1 (use power_approx_s for s >= 1)");
  }
  PowerApproxResult out = detail::power_assembly(dec, e, 1.0 / p, tol);
  out.kind = PowerKind::root_p;
  out.parameter = p;
  out.expected_order = root_order(p);
  return out;
}

/// (A+E)^s for s > 1, PSD A and A+E. Same assembly as power_approx with s in
/// place of 1/p; the error is O(||E||^2).
inline PowerApproxResult power_approx_s(const SpectralDecomposition& dec, const Hermitian& e, double s,
                                        const Tolerances& tol = {}) {
  if (!(s > 1.0) || !std::isfinite(s)) {
    throw PreconditionError("invalid_argument", "power_approx_s: s must exceed 1 (use power_approx for roots)");
  }
  PowerApproxResult out = detail::power_assembly(dec, e, s, tol);
  out.kind = PowerKind::power_s;
  out.parameter = s;
  out.expected_order = {2.0};
  return out;
}

/// |X+Z| ~ |X| + V [[Xi o (S Z11 + Z11* S), Z12], [Z12*, |Z22|]] V*, S = diag(sigma_plus).
///
/// Takes the split directly; the Z21 block is never read.
inline ModulusApproxResult modulus_approx(const SvdDecomposition& dec, const ModulusSplit& split) {
  const Index l = split.l;
  const Index m = split.m;
  Matrix top_left(l, l);
  if (l > 0) {
    const Eigen::VectorXcd s = split.sigma_plus.cast<cplx>();
    const Matrix sym = s.asDiagonal() * split.Z11 + split.Z11.adjoint() * s.asDiagonal();
    top_left = hadamard(xi_sigma_plus(split.sigma_plus).entries, sym);
  }
  const Matrix bottom_right = m > 0 ? matrix_modulus(split.Z22).matrix() : Matrix(0, 0);

  ModulusApproxResult out;
  out.split = split;
  out.first_order_term = detail::conjugate_back(dec.V, detail::block_hermitian(top_left, split.Z12, bottom_right));
  out.approximation =
      detail::sum(Hermitian::symmetrized(conjugate_diagonal(dec.V, dec.sigma)), out.first_order_term);
  return out;
}

/// First-order approximation of |X+Z| for general square X and Z; the error
/// is O(||Z||^(3/2)).
inline ModulusApproxResult modulus_approx(const Matrix& x, const Matrix& z, const Tolerances& tol = {}) {
  const auto [dec, split] = modulus_split(x, z, tol);
  return modulus_approx(dec, split);
}

/// PSD X and Hermitian Z: |X+Z| ~ X + V [[Z11, Z12], [Z21, |Z22|]] V* with
/// the blocks taken from V*ZV in the eigenbasis of X.
inline ModulusApproxResult modulus_approx_psd(const Hermitian& x, const Hermitian& z, const Tolerances& tol = {}) {
  if (z.dim() != x.dim()) throw PreconditionError("shape_mismatch", "modulus_approx_psd: X and Z differ in size");
  const SpectralDecomposition dec = eigh(x);
  const RealVector alpha = clipped_psd_spectrum(dec.alpha, tol.psd);
  const Index l = numerical_rank(alpha, tol.rank);
  const Hermitian z_hat = detail::in_basis(dec.U, z, "modulus_approx_psd");

  ModulusApproxResult out;
  out.split = split_blocks(z_hat.matrix(), alpha, l);
  Matrix blocks = z_hat.matrix();
  if (out.split.m > 0) blocks.bottomRightCorner(out.split.m, out.split.m) = matrix_modulus(out.split.Z22).matrix();
  out.first_order_term = detail::conjugate_back(dec.U, blocks);
  out.approximation = detail::sum(Hermitian::symmetrized(conjugate_diagonal(dec.U, alpha)), out.first_order_term);
  return out;
}

/// Invertible Hermitian X and Hermitian Z: |X+Z| ~ |X| + V(Xi_sigma^alpha o V*ZV)V*.
///
/// V holds the eigenvectors of X ordered by |alpha| descending (nonnegative
/// eigenvalue first on ties), which is a valid right singular basis with
/// U = V diag(sign(alpha)).
inline ModulusApproxResult modulus_approx_invertible(const Hermitian& x, const Hermitian& z,
                                                     const Tolerances& tol = {}) {
  if (z.dim() != x.dim()) {
    throw PreconditionError("shape_mismatch", "modulus_approx_invertible: X and Z differ in size");
  }
  const SpectralDecomposition eig = eigh(x);
  const Index n = eig.dim();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    const double ma = std::abs(eig.alpha(a));
    const double mb = std::abs(eig.alpha(b));
    if (ma != mb) return ma > mb;
    return eig.alpha(a) >= 0.0 && eig.alpha(b) < 0.0;
  });
  Matrix v(n, n);
  RealVector alpha(n);
  RealVector sigma(n);
  for (Index k = 0; k < n; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    v.col(k) = eig.U.col(src);
    alpha(k) = eig.alpha(src);
    sigma(k) = std::abs(alpha(k));
  }
  if (n > 0 && !(sigma(n - 1) > tol.rank * std::max(1.0, sigma(0)))) {
    std::ostringstream os;
    os << "X is numerically singular (smallest |eigenvalue| " << sigma(n - 1) << ")";
    throw PreconditionError("singular", os.str());
  }
  const DividedDifferenceMatrix xi = xi_sigma_alpha(alpha, sigma);
  const Hermitian z_hat = detail::in_basis(v, z, "modulus_approx_invertible");

  ModulusApproxResult out;
  Matrix z_check = z_hat.matrix();
  for (Index i = 0; i < n; ++i)
    if (alpha(i) < 0.0) z_check.row(i) *= -1.0;
  out.split = split_blocks(z_check, sigma, n);
  out.first_order_term = detail::conjugate_back(v, hadamard(xi.entries, z_hat.matrix()));
  out.approximation = detail::sum(Hermitian::symmetrized(conjugate_diagonal(v, sigma)), out.first_order_term);
  return out;
}

}  // namespace matperturb
