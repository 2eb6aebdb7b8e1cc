#pragma once

// Divided-difference (Loewner) matrices. Each first-order formula in this
// library is a Hadamard product of one of these with a perturbation block.

#include <cmath>
#include <sstream>

#include "matperturb/matrix_core.hpp"

namespace matperturb {

enum class DividedDifferenceKind {
  general_f,       ///< [f, alpha] with f' on coinciding eigenvalues
  power_one,       ///< [t^s, alpha]_1: value 1 where both eigenvalues vanish
  xi_sigma_plus,   ///< 1/(sigma_i + sigma_j)
  xi_sigma_alpha,  ///< (alpha_i + alpha_j)/(sigma_i + sigma_j)
};

struct DividedDifferenceMatrix {
  RealMatrix entries;
  DividedDifferenceKind kind = DividedDifferenceKind::general_f;

  Index dim() const noexcept { return entries.rows(); }
};

namespace detail {

/// Fills the upper triangle via `entry(i, j)` and mirrors it, so the result is
/// symmetric bit for bit.
template <class Entry>
RealMatrix symmetric_from(Index n, Entry&& entry) {
  RealMatrix w(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      w(i, j) = entry(i, j);
      w(j, i) = w(i, j);
    }
  }
  return w;
}

inline double coincidence_threshold(const RealVector& alpha, double pair_tol) {
  return pair_tol * (1.0 + (alpha.size() ? alpha.cwiseAbs().maxCoeff() : 0.0));
}

inline void require_finite_entry(double v, Index i, Index j, const char* what) {
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << what << ": non-finite entry at (" << i << "," << j << ")";
    throw PreconditionError("undefined_function", os.str());
  }
}

}  // namespace detail

/// [f, alpha](i,j) = (f(a_i) - f(a_j))/(a_i - a_j), or f'(a_i) when the two
/// eigenvalues coincide within pair_tol * (1 + max|alpha|).
template <class F, class FPrime>
DividedDifferenceMatrix divided_difference(F&& f, FPrime&& f_prime, const RealVector& alpha,
                                           double pair_tol = Tolerances{}.pair) {
  const double same = detail::coincidence_threshold(alpha, pair_tol);
  RealMatrix w = detail::symmetric_from(alpha.size(), [&](Index i, Index j) {
    const double ai = alpha(i);
    const double aj = alpha(j);
    const double v = std::abs(ai - aj) > same ? (f(ai) - f(aj)) / (ai - aj) : f_prime(ai);
    detail::require_finite_entry(v, i, j, "divided_difference");
    return v;
  });
  return {std::move(w), DividedDifferenceKind::general_f};
}

/// Cancellation-free [sqrt, alpha](i,j) = 1/(sqrt(a_i) + sqrt(a_j)).
inline DividedDifferenceMatrix sqrt_divided_difference(const RealVector& alpha) {
  for (Index i = 0; i < alpha.size(); ++i) {
    if (alpha(i) < 0.0) throw PreconditionError("invalid_argument", "sqrt_divided_difference: negative eigenvalue");
  }
  RealMatrix w = detail::symmetric_from(alpha.size(), [&](Index i, Index j) {
    const double denom = std::sqrt(alpha(i)) + std::sqrt(alpha(j));
    if (denom == 0.0) {
      std::ostringstream os;
      os << "sqrt_divided_difference: alpha[" << i << "] = alpha[" << j
         << "] = 0 gives an infinite entry; use power_dd_one for a singular spectrum";
      throw PreconditionError("kernel_present", os.str());
    }
    return 1.0 / denom;
  });
  return {std::move(w), DividedDifferenceKind::general_f};
}

/// [t^s, alpha]_1: the usual divided difference of t^s, except that pairs of
/// vanishing eigenvalues get the value 1 instead of s * 0^(s-1).
///
/// For s = 1/2 the closed form 1/(sqrt(a_i) + sqrt(a_j)) is used throughout.
inline DividedDifferenceMatrix power_dd_one(double s, const RealVector& alpha, double pair_tol = Tolerances{}.pair) {
  if (!(s > 0.0) || !std::isfinite(s)) throw PreconditionError("invalid_argument", "power_dd_one: s must be positive");
  const double same = detail::coincidence_threshold(alpha, pair_tol);
  for (Index i = 0; i < alpha.size(); ++i) {
    if (alpha(i) < 0.0) throw PreconditionError("invalid_argument", "power_dd_one: negative eigenvalue");
  }
  const auto zero = [&](double a) { return a <= same; };
  RealMatrix w = detail::symmetric_from(alpha.size(), [&](Index i, Index j) {
    const double ai = alpha(i);
    const double aj = alpha(j);
    if (zero(ai) && zero(aj)) return 1.0;
    double v;
    if (s == 0.5) {
      v = 1.0 / (std::sqrt(ai) + std::sqrt(aj));
    } else if (std::abs(ai - aj) > same) {
      v = (std::pow(ai, s) - std::pow(aj, s)) / (ai - aj);
    } else {
      v = s * std::pow(ai, s - 1.0);
    }
    detail::require_finite_entry(v, i, j, "power_dd_one");
    return v;
  });
  return {std::move(w), DividedDifferenceKind::power_one};
}

inline DividedDifferenceMatrix xi_sigma_plus(const RealVector& sigma_plus) {
  for (Index i = 0; i < sigma_plus.size(); ++i) {
    if (!(sigma_plus(i) > 0.0)) {
      std::ostringstream os;
      os << "xi_sigma_plus: sigma[" << i << "]=" << sigma_plus(i) << " is not positive";
      throw PreconditionError("invalid_argument", os.str());
    }
  }
  RealMatrix w = detail::symmetric_from(sigma_plus.size(),
                                        [&](Index i, Index j) { return 1.0 / (sigma_plus(i) + sigma_plus(j)); });
  return {std::move(w), DividedDifferenceKind::xi_sigma_plus};
}

/// (a_i + a_j)/(sigma_i + sigma_j) for an invertible Hermitian spectrum with
/// sigma = |alpha|. Every entry lies in [-1, 1].
inline DividedDifferenceMatrix xi_sigma_alpha(const RealVector& alpha, const RealVector& sigma) {
  if (alpha.size() != sigma.size()) throw PreconditionError("shape_mismatch", "xi_sigma_alpha: length mismatch");
  for (Index i = 0; i < sigma.size(); ++i) {
    if (!(sigma(i) > 0.0)) {
      std::ostringstream os;
      os << "xi_sigma_alpha: sigma[" << i << "]=" << sigma(i) << " is not positive (X singular)";
      throw PreconditionError("singular", os.str());
    }
    if (std::abs(sigma(i) - std::abs(alpha(i))) > 1e-12 * (1.0 + sigma(i))) {
      throw PreconditionError("invalid_argument", "xi_sigma_alpha: sigma must equal |alpha|");
    }
  }
  RealMatrix w = detail::symmetric_from(sigma.size(), [&](Index i, Index j) {
    const double v = (alpha(i) + alpha(j)) / (sigma(i) + sigma(j));
    if (std::abs(v) > 1.0 + 1e-12) throw NumericalError("invariant_violated", "xi_sigma_alpha entry exceeds 1");
    return v;
  });
  return {std::move(w), DividedDifferenceKind::xi_sigma_alpha};
}

}  // namespace matperturb
