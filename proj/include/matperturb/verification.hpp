#pragma once

// Seeded random instances, oracle error measurement and log-log order fits.
// This is what turns an O(||E||^r) statement into a pass/fail check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "matperturb/decomposition.hpp"
#include "matperturb/first_order.hpp"
#include "matperturb/matrix_core.hpp"
#include "matperturb/projectors.hpp"

namespace matperturb {

enum class PerturbationKind { hermitian_psd_compatible, general_complex, hermitian };

inline std::string_view to_string(PerturbationKind k) {
  switch (k) {
    case PerturbationKind::hermitian_psd_compatible: return "hermitian_psd_compatible";
    case PerturbationKind::general_complex: return "general_complex";
    case PerturbationKind::hermitian: return "hermitian";
  }
  return "?";
}

struct InstanceSpec {
  Index n = 6;
  Index rank = 3;
  double lo = 0.5;
  double hi = 2.0;
  PerturbationKind kind = PerturbationKind::hermitian_psd_compatible;
  std::uint64_t seed = 0;
  /// Random signs on the nonzero eigenvalues (indefinite Hermitian base).
  bool signed_spectrum = false;

  void validate() const {
    std::ostringstream os;
    if (n < 1 || n > 64) os << "n=" << n << " outside [1, 64]; ";
    if (rank < 0 || rank > n) os << "rank=" << rank << " outside [0, n]; ";
    if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi)) os << "spectrum range [" << lo << ", " << hi << "] invalid; ";
    const std::string msg = os.str();
    if (!msg.empty()) throw PreconditionError("invalid_argument", "InstanceSpec: " + msg.substr(0, msg.size() - 2));
  }
};

/// Base matrix (A, or X in the modulus setting) with a unit-norm direction
/// (E or Z) and the factors used to build them.
struct Instance {
  Matrix base;
  Matrix direction;
  Matrix U;
  Matrix V;
  RealVector spectrum;  ///< eigenvalues (Hermitian kinds) or singular values, kernel last
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for trial `index` of a campaign: mix64(seed XOR index).
constexpr std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) { return mix64(seed ^ index); }

namespace detail {

using Rng = std::mt19937_64;

inline Matrix gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = cplx(re, im);
    }
  return g;
}

inline Matrix gaussian_hermitian(Index n, Rng& rng) {
  const Matrix g = gaussian(n, n, rng);
  return 0.5 * (g + g.adjoint());
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of R's
/// diagonal folded back into Q.
inline Matrix random_unitary(Index n, Rng& rng) {
  const Matrix g = gaussian(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

inline Matrix normalized(const Matrix& m) {
  const double norm = spectral_norm(m);
  return norm > 0.0 ? Matrix(m / norm) : m;
}

}  // namespace detail

inline Instance random_instance(const InstanceSpec& spec) {
  spec.validate();
  detail::Rng rng(spec.seed);
  const Index n = spec.n;
  const Index l = spec.rank;
  const Index m = n - l;

  std::uniform_real_distribution<double> uniform(spec.lo, spec.hi);
  std::vector<double> values(static_cast<std::size_t>(l));
  for (auto& v : values) v = uniform(rng);
  std::sort(values.begin(), values.end(), std::greater<>());
  RealVector spectrum = RealVector::Zero(n);
  for (Index i = 0; i < l; ++i) spectrum(i) = values[static_cast<std::size_t>(i)];

  Instance inst;
  inst.U = detail::random_unitary(n, rng);

  switch (spec.kind) {
    case PerturbationKind::hermitian_psd_compatible: {
      // Blocks in the eigenbasis, reassembled so that A + tE stays PSD for t in (0, 1].
      SchurSplit split;
      split.l = l;
      split.m = m;
      split.alpha_plus = spectrum.head(l);
      split.B = l > 0 ? Matrix(detail::normalized(detail::gaussian_hermitian(l, rng)) * (0.25 * spec.lo))
                      : Matrix(0, 0);
      split.C = detail::gaussian(l, m, rng) / std::sqrt(static_cast<double>(n));
      const Matrix g = detail::gaussian(m, m, rng);
      split.D = g.adjoint() * g / static_cast<double>(std::max<Index>(n, 1));
      Matrix e_hat = schur_reassemble(split).matrix();
      const double norm = spectral_norm(e_hat);
      if (norm > 1.0) e_hat /= norm;
      inst.V = inst.U;
      inst.spectrum = spectrum;
      inst.base = Hermitian::symmetrized(conjugate_diagonal(inst.U, spectrum)).matrix();
      inst.direction = Hermitian::symmetrized(inst.U * e_hat * inst.U.adjoint()).matrix();
      break;
    }
    case PerturbationKind::hermitian: {
      if (spec.signed_spectrum) {
        std::bernoulli_distribution coin(0.5);
        for (Index i = 0; i < l; ++i)
          if (coin(rng)) spectrum(i) = -spectrum(i);
        std::sort(spectrum.data(), spectrum.data() + n, std::greater<>());
      }
      inst.V = inst.U;
      inst.spectrum = spectrum;
      inst.base = Hermitian::symmetrized(conjugate_diagonal(inst.U, spectrum)).matrix();
      inst.direction = Hermitian::symmetrized(detail::normalized(detail::gaussian_hermitian(n, rng))).matrix();
      break;
    }
    case PerturbationKind::general_complex: {
      inst.V = detail::random_unitary(n, rng);
      inst.spectrum = spectrum;
      Matrix scaled = inst.U;
      for (Index j = 0; j < n; ++j) scaled.col(j) *= spectrum(j);
      inst.base = scaled * inst.V.adjoint();
      inst.direction = detail::normalized(detail::gaussian(n, n, rng));
      break;
    }
  }
  return inst;
}

/// t_k = 0.1 * 2^-k, k = 0..11.
inline std::vector<double> default_scales() {
  std::vector<double> s(12);
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = 0.1 * std::ldexp(1.0, -static_cast<int>(k));
  return s;
}

inline void validate_scales(const std::vector<double>& scales) {
  if (scales.size() < 6) {
    std::ostringstream os;
    os << "at least 6 scales are required, got " << scales.size();
    throw PreconditionError("invalid_argument", os.str());
  }
  for (std::size_t k = 0; k < scales.size(); ++k) {
    if (!(scales[k] > 0.0) || !std::isfinite(scales[k]))
      throw PreconditionError("invalid_argument", "scales must be positive and finite");
    if (k > 0 && !(scales[k] < scales[k - 1]))
      throw PreconditionError("invalid_argument", "scales must be strictly decreasing");
  }
}

/// Least-squares slope of log(errors) against log(scales).
inline double fit_log_log_slope(const std::vector<double>& scales, const std::vector<double>& errors) {
  const std::size_t k = scales.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    mx += std::log(scales[i]);
    my += std::log(errors[i]);
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double dx = std::log(scales[i]) - mx;
    sxy += dx * (std::log(errors[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

struct OrderFitReport {
  std::string label;
  std::vector<double> scales;
  std::vector<double> errors;
  std::vector<double> noise_floors;
  double fitted_slope = 0.0;  ///< +inf when every error sits at the noise floor
  Index fit_points_used = 0;
  ExpectedOrder expected_order;
  double slope_margin = 0.1;
  bool pass = false;
  std::string norm_used = "spectral";
};

/// Noise floor for a point whose oracle value has norm `exact_norm`.
inline double noise_floor(double exact_norm) {
  return 1e3 * std::numeric_limits<double>::epsilon() * (1.0 + exact_norm);
}

/// Fits the slope over points with error above their noise floor. Passes when
/// the slope reaches expected - margin; an unguaranteed order always passes.
inline OrderFitReport fit_order(std::vector<double> scales, std::vector<double> errors, std::vector<double> floors,
                                ExpectedOrder expected, double slope_margin = 0.1) {
  OrderFitReport r;
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < scales.size(); ++k) {
    if (errors[k] > floors[k]) {
      xs.push_back(scales[k]);
      ys.push_back(errors[k]);
    }
  }
  r.fit_points_used = static_cast<Index>(xs.size());
  if (xs.size() < 2) {
    r.fitted_slope = std::numeric_limits<double>::infinity();
    r.fit_points_used = 0;
  } else {
    r.fitted_slope = fit_log_log_slope(xs, ys);
  }
  r.scales = std::move(scales);
  r.errors = std::move(errors);
  r.noise_floors = std::move(floors);
  r.expected_order = expected;
  r.slope_margin = slope_margin;
  r.pass = !expected.guaranteed() || r.fitted_slope >= *expected.value - slope_margin;
  return r;
}

enum class Problem {
  dk,                  ///< t^s at nonsingular PSD A, classical first-order term
  power_p,             ///< (A+E)^(1/p) at singular PSD A
  power_s,             ///< (A+E)^s, s > 1
  modulus,             ///< |X+Z| for general X, Z
  modulus_psd,         ///< PSD X, Hermitian Z
  modulus_invertible,  ///< invertible Hermitian X, Hermitian Z
  projector,           ///< exact vs first-order spectral projectors
  projector_kernel,    ///< (P0 Z P0)^(1/p) - Z^(1/p) for Z supported on the kernel
  projector_cross,     ///< P1 Z P0
  projector_range,     ///< P1 Z P1
};

inline std::string_view to_string(Problem p) {
  switch (p) {
    case Problem::dk: return "dk";
    case Problem::power_p: return "power";
    case Problem::power_s: return "power-s";
    case Problem::modulus: return "modulus";
    case Problem::modulus_psd: return "modulus-psd";
    case Problem::modulus_invertible: return "modulus-inv";
    case Problem::projector: return "lemma-gt";
    case Problem::projector_kernel: return "lemma-gt1";
    case Problem::projector_cross: return "lemma-gt2-cross";
    case Problem::projector_range: return "lemma-gt2-range";
  }
  return "?";
}

/// Exponent parameter: s for dk (f = t^s) and power_s, p for power_p and
/// projector_kernel. Ignored elsewhere.
struct ProblemParams {
  double exponent = 0.5;
};

/// Instance family each problem is exercised on.
inline InstanceSpec default_spec(Problem problem, Index n, Index rank, std::uint64_t seed) {
  InstanceSpec spec;
  spec.n = n;
  spec.rank = rank;
  spec.seed = seed;
  switch (problem) {
    case Problem::dk:
    case Problem::modulus_psd:
      spec.kind = PerturbationKind::hermitian;
      break;
    case Problem::modulus_invertible:
      spec.kind = PerturbationKind::hermitian;
      spec.signed_spectrum = true;
      break;
    case Problem::modulus:
      spec.kind = PerturbationKind::general_complex;
      break;
    default:
      spec.kind = PerturbationKind::hermitian_psd_compatible;
  }
  return spec;
}

inline ExpectedOrder expected_order_for(Problem problem, const ProblemParams& params) {
  switch (problem) {
    case Problem::dk:
    case Problem::power_s:
    case Problem::projector:
    case Problem::projector_cross: return {2.0};
    case Problem::projector_range: return {3.0};
    case Problem::power_p:
    case Problem::projector_kernel: return root_order(params.exponent);
    case Problem::modulus:
    case Problem::modulus_psd:
    case Problem::modulus_invertible: return {1.5};
  }
  return {};
}

namespace detail {

struct ErrorSample {
  double error;
  double exact_norm;
};

/// Kernel-supported PSD matrix diag(0, D) built from the Schur complement of
/// the instance direction, normalized to spectral norm 1.
inline Matrix kernel_supported(const RealVector& alpha, const Hermitian& e_hat, Index l) {
  const SchurSplit split = schur_split(alpha, e_hat, l);
  Matrix z = Matrix::Zero(alpha.size(), alpha.size());
  z.bottomRightCorner(split.m, split.m) = split.D;
  return normalized(z);
}

}  // namespace detail

/// Measures ||exact(t) - approx(t)|| in the spectral norm over `scales` and
/// fits the log-log slope.
inline OrderFitReport error_order_fit(Problem problem, const Instance& inst, const ProblemParams& params,
                                      const std::vector<double>& scales, double slope_margin = 0.1,
                                      const Tolerances& tol = {}) {
  validate_scales(scales);
  const Index n = inst.base.rows();
  std::function<detail::ErrorSample(double)> sample;

  // Eigenbasis quantities for the projector problems.
  const Index l = numerical_rank(inst.spectrum, tol.rank);
  RealVector alpha = inst.spectrum;
  alpha.tail(n - l).setZero();

  switch (problem) {
    case Problem::dk:
    case Problem::power_p:
    case Problem::power_s: {
      const Hermitian a = Hermitian::checked(inst.base, tol.hermitian);
      const SpectralDecomposition dec = eigh(a);
      const double s = problem == Problem::power_p ? 1.0 / params.exponent : params.exponent;
      sample = [&, dec, s](double t) {
        const Hermitian e = Hermitian::symmetrized(t * inst.direction);
        const Hermitian exact = matrix_power(Hermitian::symmetrized(inst.base + e.matrix()), s, tol);
        Matrix approx;
        if (problem == Problem::dk) approx = dk_approx_power(dec, e, s, tol).approximation;
        else if (problem == Problem::power_p) approx = power_approx(dec, e, params.exponent, tol).approximation;
        else approx = power_approx_s(dec, e, s, tol).approximation;
        return detail::ErrorSample{spectral_norm(exact.matrix() - approx), spectral_norm(exact.matrix())};
      };
      break;
    }
    case Problem::modulus:
      sample = [&](double t) {
        const Matrix z = t * inst.direction;
        const Hermitian exact = matrix_modulus(inst.base + z);
        const Matrix approx = modulus_approx(inst.base, z, tol).approximation;
        return detail::ErrorSample{spectral_norm(exact.matrix() - approx), spectral_norm(exact.matrix())};
      };
      break;
    case Problem::modulus_psd:
    case Problem::modulus_invertible:
      sample = [&](double t) {
        const Hermitian x = Hermitian::checked(inst.base, tol.hermitian);
        const Hermitian z = Hermitian::symmetrized(t * inst.direction);
        const Hermitian exact = matrix_modulus(inst.base + z.matrix());
        const Matrix approx = problem == Problem::modulus_psd ? modulus_approx_psd(x, z, tol).approximation.matrix()
                                                              : modulus_approx_invertible(x, z, tol).approximation.matrix();
        return detail::ErrorSample{spectral_norm(exact.matrix() - approx), spectral_norm(exact.matrix())};
      };
      break;
    case Problem::projector:
    case Problem::projector_kernel:
    case Problem::projector_cross:
    case Problem::projector_range: {
      const Hermitian e_hat = Hermitian::symmetrized(inst.U.adjoint() * inst.direction * inst.U);
      const Matrix z = problem == Problem::projector ? Matrix() : detail::kernel_supported(alpha, e_hat, l);
      sample = [&, e_hat, z](double t) {
        const Hermitian e = Hermitian::symmetrized(t * e_hat.matrix());
        const ProjectorPair exact = spectral_projectors(alpha, e, l);
        if (problem == Problem::projector) {
          const ProjectorPair first = projector_first_order(alpha.head(l), e.matrix().topRightCorner(l, n - l));
          return detail::ErrorSample{spectral_norm(exact.P1.matrix() - first.P1.matrix()), 1.0};
        }
        const Matrix zb = t * z;
        const Matrix& p0 = exact.P0.matrix();
        const Matrix& p1 = exact.P1.matrix();
        if (problem == Problem::projector_kernel) {
          const double s = 1.0 / params.exponent;
          const Hermitian lhs = matrix_power(Hermitian::symmetrized(p0 * zb * p0), s, tol);
          const Hermitian rhs = matrix_power(Hermitian::symmetrized(zb), s, tol);
          return detail::ErrorSample{spectral_norm(lhs.matrix() - rhs.matrix()), spectral_norm(rhs.matrix())};
        }
        const Matrix product = problem == Problem::projector_cross ? Matrix(p1 * zb * p0) : Matrix(p1 * zb * p1);
        return detail::ErrorSample{spectral_norm(product), spectral_norm(zb)};
      };
      break;
    }
  }

  std::vector<double> errors, floors;
  errors.reserve(scales.size());
  floors.reserve(scales.size());
  for (double t : scales) {
    const detail::ErrorSample s = sample(t);
    errors.push_back(s.error);
    floors.push_back(noise_floor(s.exact_norm));
  }
  OrderFitReport r = fit_order(scales, std::move(errors), std::move(floors), expected_order_for(problem, params),
                               slope_margin);
  r.label = std::string(to_string(problem));
  return r;
}

struct CampaignConfig {
  Problem problem = Problem::power_p;
  Index n = 6;
  Index rank = 3;
  double lo = 0.5;
  double hi = 2.0;
  ProblemParams params;
  Index trials = 10;
  std::uint64_t seed = 0;
  std::vector<double> scales = default_scales();
  double slope_margin = 0.1;
  unsigned threads = 1;
  Tolerances tol;
};

struct TrialReport {
  Index trial = 0;
  std::uint64_t seed = 0;
  OrderFitReport fit;
};

inline InstanceSpec campaign_spec(const CampaignConfig& cfg, Index trial) {
  InstanceSpec spec = default_spec(cfg.problem, cfg.n, cfg.rank, trial_seed(cfg.seed, static_cast<std::uint64_t>(trial)));
  spec.lo = cfg.lo;
  spec.hi = cfg.hi;
  return spec;
}

/// Runs `trials` independent order fits. Results are stored by trial index, so
/// the output does not depend on `threads`.
inline std::vector<TrialReport> run_campaign(const CampaignConfig& cfg) {
  if (cfg.trials < 1) throw PreconditionError("invalid_argument", "trials must be at least 1");
  validate_scales(cfg.scales);
  campaign_spec(cfg, 0).validate();

  std::vector<TrialReport> out(static_cast<std::size_t>(cfg.trials));
  std::vector<std::exception_ptr> failures(out.size());
  const auto run_one = [&](std::size_t k) {
    try {
      const InstanceSpec spec = campaign_spec(cfg, static_cast<Index>(k));
      const Instance inst = random_instance(spec);
      out[k] = {static_cast<Index>(k), spec.seed,
                error_order_fit(cfg.problem, inst, cfg.params, cfg.scales, cfg.slope_margin, cfg.tol)};
    } catch (...) {
      failures[k] = std::current_exception();
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(out.size())));
  if (workers == 1) {
    for (std::size_t k = 0; k < out.size(); ++k) run_one(k);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t k = w; k < out.size(); k += workers) run_one(k);
      });
    }
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  return out;
}

struct WihlerResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool holds = false;
};

/// ||Z^(1/p) - A^(1/p)||_F <= n^((p-1)/2) ||Z - A||_F^(1/p), both sides in
/// the Frobenius norm.
inline WihlerResult wihler_check(const Hermitian& a, const Hermitian& z, double p, const Tolerances& tol = {}) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw PreconditionError("invalid_argument", "wihler_check: p must be >= 1");
  if (a.dim() != z.dim()) throw PreconditionError("shape_mismatch", "wihler_check: A and Z differ in size");
  const double n = static_cast<double>(a.dim());
  WihlerResult r;
  r.lhs = frobenius_norm(matrix_power(z, 1.0 / p, tol).matrix() - matrix_power(a, 1.0 / p, tol).matrix());
  r.rhs = std::pow(n, (p - 1.0) / 2.0) * std::pow(frobenius_norm(z.matrix() - a.matrix()), 1.0 / p);
  r.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : (r.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  r.holds = r.lhs <= r.rhs * (1.0 + 1e-10);
  return r;
}

struct WihlerSweep {
  Index n = 0;
  double p = 0.0;
  Index trials = 0;
  Index violations = 0;
  double max_ratio = 0.0;
  std::optional<double> sharpness_ratio;  ///< A = 0, Z = (t); only for n = 1
};

/// Random PSD pairs of mixed rank: independent pairs, and pairs where Z is a
/// small PSD perturbation of A (the regime where the Hoelder bound is tight).
inline WihlerSweep wihler_sweep(Index n, double p, Index trials, std::uint64_t seed, const Tolerances& tol = {}) {
  if (n < 1 || n > 64) throw PreconditionError("invalid_argument", "wihler_sweep: n outside [1, 64]");
  if (!(p >= 1.0)) throw PreconditionError("invalid_argument", "wihler_sweep: p must be >= 1");
  if (trials < 1) throw PreconditionError("invalid_argument", "wihler_sweep: trials must be at least 1");
  WihlerSweep out;
  out.n = n;
  out.p = p;
  out.trials = trials;
  const auto record = [&](const WihlerResult& r) {
    out.max_ratio = std::max(out.max_ratio, r.ratio);
    if (!r.holds) ++out.violations;
  };
  for (Index k = 0; k < trials; ++k) {
    detail::Rng rng(trial_seed(seed, static_cast<std::uint64_t>(k)));
    std::uniform_int_distribution<Index> rank_dist(0, n);
    std::uniform_real_distribution<double> log_scale(-6.0, 1.0);
    const auto random_psd = [&]() {
      const Matrix g = detail::gaussian(n, rank_dist(rng), rng);
      return Matrix(g * g.adjoint() * std::pow(10.0, log_scale(rng)));
    };
    const Matrix a = random_psd();
    const Matrix z = (k % 2 == 0) ? random_psd() : Matrix(a + random_psd());
    record(wihler_check(Hermitian::symmetrized(a), Hermitian::symmetrized(z), p, tol));
  }
  if (n == 1) {
    Matrix zero = Matrix::Zero(1, 1);
    Matrix t(1, 1);
    t(0, 0) = 0.37;
    const WihlerResult r = wihler_check(Hermitian::symmetrized(zero), Hermitian::symmetrized(t), p, tol);
    record(r);
    out.sharpness_ratio = r.ratio;
  }
  return out;
}

struct LemmaRemarkReport {
  double p = 0.0;
  OrderFitReport structured;  ///< kernel-supported Z, slope close to min(1+1/p, 3/p)
  OrderFitReport generic;     ///< scalar A = 0, Z = (t), slope 1/p
  bool holds = false;
};

/// The kernel-structured projector problem converges strictly faster than the
/// generic Hoelder rate 1/p.
inline LemmaRemarkReport lemma_remark_check(double p, std::uint64_t seed, Index n = 6, Index rank = 3,
                                            const std::vector<double>& scales = default_scales()) {
  LemmaRemarkReport out;
  out.p = p;
  const Instance inst = random_instance(default_spec(Problem::projector_kernel, n, rank, seed));
  out.structured = error_order_fit(Problem::projector_kernel, inst, {p}, scales);

  std::vector<double> errors, floors;
  const Hermitian zero = Hermitian::symmetrized(Matrix::Zero(1, 1));
  const Matrix root_of_zero = matrix_power(zero, 1.0 / p).matrix();
  for (double t : scales) {
    const Hermitian z = Hermitian::symmetrized(Matrix::Constant(1, 1, cplx(t, 0.0)));
    const Matrix root = matrix_power(z, 1.0 / p).matrix();
    errors.push_back(frobenius_norm(root - root_of_zero));
    floors.push_back(noise_floor(frobenius_norm(root)));
  }
  out.generic = fit_order(scales, std::move(errors), std::move(floors), ExpectedOrder{1.0 / p});
  out.generic.label = "wihler-generic";
  out.holds = out.structured.fitted_slope > 1.0 / p + 0.2 && std::abs(out.generic.fitted_slope - 1.0 / p) < 1e-6;
  return out;
}

}  // namespace matperturb
