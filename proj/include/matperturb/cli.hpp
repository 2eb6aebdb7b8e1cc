#pragma once

// Command implementations behind the `matperturb` executable. Each command
// returns a report and an exit code; argument parsing lives in tools/.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "matperturb/first_order.hpp"
#include "matperturb/io.hpp"
#include "matperturb/verification.hpp"

namespace matperturb::cli {

using io::json;

inline constexpr const char* kVersion = "matperturb 0.1.0";

enum ExitCode : int { ok = 0, precondition_failure = 1, numerical_failure = 2, acceptance_failure = 3 };

struct Outcome {
  int exit_code = ok;
  json report;
  std::string csv;  ///< "scale,error,trial" table; empty unless requested
};

/// Command-line misuse (bad flag values); exit code 1.
class UsageError : public PreconditionError {
 public:
  explicit UsageError(const std::string& message) : PreconditionError("usage", message) {}
};

inline json tolerances_json(const Tolerances& t) {
  return json{{"hermitian", t.hermitian}, {"unitary", t.unitary}, {"recon", t.recon},
              {"psd", t.psd},             {"rank", t.rank},       {"pair", t.pair}};
}

inline json fit_json(const OrderFitReport& r) {
  json j;
  j["label"] = r.label;
  j["norm_used"] = r.norm_used;
  j["expected_order"] = r.expected_order.guaranteed() ? json(*r.expected_order.value) : json("unguaranteed");
  j["slope_margin"] = r.slope_margin;
  j["fitted_slope"] = r.fitted_slope;
  j["fit_points_used"] = r.fit_points_used;
  j["pass"] = r.pass;
  j["scales"] = r.scales;
  j["errors"] = r.errors;
  j["noise_floors"] = r.noise_floors;
  return j;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Common report skeleton: version, command echo, optional timestamp.
inline json report_header(const std::string& command, const std::vector<std::string>& argv, bool timestamp) {
  json j;
  j["artifact"] = kVersion;
  j["command"] = command;
  j["argv"] = argv;
  if (timestamp) j["timestamp"] = utc_timestamp();
  return j;
}

inline json error_json(const Error& e) {
  return json{{"code", e.code()},
              {"kind", e.kind() == ErrorKind::precondition ? "precondition" : "numerical"},
              {"message", e.what()}};
}

inline int exit_code_for(const Error& e) {
  return e.kind() == ErrorKind::precondition ? precondition_failure : numerical_failure;
}

/// MATPERTURB_SEED, when set, takes precedence over --seed.
inline std::uint64_t resolve_seed(std::uint64_t flag_seed) {
  if (const char* env = std::getenv("MATPERTURB_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') throw UsageError("MATPERTURB_SEED must be an unsigned integer");
    return v;
  }
  return flag_seed;
}

// ---------------------------------------------------------------- approx

struct ApproxOptions {
  std::string mode;
  std::string input;
  std::string perturb;
  std::optional<double> p;
  std::optional<double> s;
  Tolerances tol;
  std::vector<std::string> argv;
  bool timestamp = true;
};

inline Outcome cmd_approx(const ApproxOptions& opt) {
  Outcome out;
  out.report = report_header("approx", opt.argv, opt.timestamp);
  json config{{"mode", opt.mode}, {"input", opt.input}, {"perturb", opt.perturb}, {"tolerances", tolerances_json(opt.tol)}};
  if (opt.p) config["p"] = *opt.p;
  if (opt.s) config["s"] = *opt.s;
  out.report["config"] = config;

  const Tolerances& tol = opt.tol;
  const io::MatrixFile base_file = io::read_matrix_file(opt.input, tol);
  const io::MatrixFile pert_file = io::read_matrix_file(opt.perturb, tol);
  const Matrix& base = base_file.data;
  const Matrix& pert = pert_file.data;
  if (base.rows() != base.cols() || pert.rows() != pert.cols() || base.rows() != pert.rows()) {
    throw PreconditionError("shape_mismatch", "input and perturbation must be square and of equal size");
  }

  Matrix approximation, term, exact;
  std::string expected = "2";
  const auto hermitian = [&](const Matrix& m) { return Hermitian::checked(m, tol.hermitian); };

  if (opt.mode == "dk" || opt.mode == "power" || opt.mode == "power-s") {
    const Hermitian a = hermitian(base);
    const Hermitian e = hermitian(pert);
    const SpectralDecomposition dec = eigh(a);
    double s = 0.5;
    if (opt.mode == "dk") {
      if (opt.s) s = *opt.s;
      else if (opt.p) s = 1.0 / *opt.p;
      const FirstOrderResult r = dk_approx_power(dec, e, s, tol);
      approximation = r.approximation;
      term = r.first_order_term;
    } else if (opt.mode == "power") {
      if (!opt.p) throw UsageError("--p is required for mode power");
      s = 1.0 / *opt.p;
      const PowerApproxResult r = power_approx(dec, e, *opt.p, tol);
      approximation = r.approximation;
      term = r.first_order_term;
      expected = r.expected_order.label();
    } else {
      if (!opt.s) throw UsageError("--s is required for mode power-s");
      s = *opt.s;
      const PowerApproxResult r = power_approx_s(dec, e, s, tol);
      approximation = r.approximation;
      term = r.first_order_term;
    }
    exact = matrix_power(Hermitian::symmetrized(a.matrix() + e.matrix()), s, tol);
  } else if (opt.mode == "modulus" || opt.mode == "modulus-psd" || opt.mode == "modulus-inv") {
    ModulusApproxResult r;
    if (opt.mode == "modulus") r = modulus_approx(base, pert, tol);
    else if (opt.mode == "modulus-psd") r = modulus_approx_psd(hermitian(base), hermitian(pert), tol);
    else r = modulus_approx_invertible(hermitian(base), hermitian(pert), tol);
    approximation = r.approximation;
    term = r.first_order_term;
    expected = r.expected_order.label();
    exact = matrix_modulus(base + pert);
  } else {
    throw UsageError("unknown mode '" + opt.mode + "'");
  }

  json results;
  results["expected_order"] = expected;
  results["approximation"] = io::matrix_to_json(approximation, io::MatrixKind::hermitian);
  results["first_order_term"] = io::matrix_to_json(term, io::MatrixKind::hermitian);
  results["exact"] = io::matrix_to_json(exact, io::MatrixKind::hermitian);
  results["error"] = json{{"spectral", spectral_norm(Matrix(exact - approximation))},
                          {"frobenius", frobenius_norm(Matrix(exact - approximation))}};
  out.report["results"] = results;
  out.report["summary"] = json{{"pass", true}, {"exit_code", ok}};
  return out;
}

// ----------------------------------------------------------------- order

struct OrderOptions {
  std::string problem;
  Index n = 6;
  std::optional<Index> rank;
  std::optional<double> p;
  std::optional<double> s;
  Index trials = 10;
  std::uint64_t seed = 0;
  std::vector<double> scales = default_scales();
  bool force = false;
  bool want_csv = false;
  unsigned threads = 1;
  double lo = 0.5;
  double hi = 2.0;
  double slope_margin = 0.1;
  Tolerances tol;
  std::vector<std::string> argv;
  bool timestamp = true;
};

namespace detail {

inline void require_root_range(double p, bool force, const char* what) {
  if (!(p > 1.0)) throw UsageError(std::string(what) + ": --p must exceed 1");
  if (p >= 3.0 && !force) {
    throw UsageError(std::string(what) + ": --p must lie in (1, 3); pass --force to run p >= 3 without a guaranteed order");
  }
}

}  // namespace detail

inline Outcome cmd_order(const OrderOptions& opt) {
  Outcome out;
  out.report = report_header("order", opt.argv, opt.timestamp);

  if (opt.scales.size() < 6) throw UsageError("--scales needs at least 6 values");
  validate_scales(opt.scales);
  if (opt.trials < 1) throw UsageError("--trials must be at least 1");

  std::vector<Problem> problems;
  ProblemParams params;
  const std::string& name = opt.problem;
  if (name == "dk") {
    problems = {Problem::dk};
    params.exponent = opt.s ? *opt.s : (opt.p ? 1.0 / *opt.p : 0.5);
  } else if (name == "power") {
    problems = {Problem::power_p};
    params.exponent = opt.p.value_or(2.0);
    detail::require_root_range(params.exponent, opt.force, "power");
  } else if (name == "power-s") {
    problems = {Problem::power_s};
    params.exponent = opt.s.value_or(2.0);
    if (!(params.exponent > 1.0)) throw UsageError("power-s: --s must exceed 1");
  } else if (name == "modulus") {
    problems = {Problem::modulus};
  } else if (name == "modulus-psd") {
    problems = {Problem::modulus_psd};
  } else if (name == "modulus-inv") {
    problems = {Problem::modulus_invertible};
  } else if (name == "lemma-gt") {
    problems = {Problem::projector};
  } else if (name == "lemma-gt1") {
    problems = {Problem::projector_kernel};
    params.exponent = opt.p.value_or(2.0);
    detail::require_root_range(params.exponent, opt.force, "lemma-gt1");
  } else if (name == "lemma-gt2") {
    problems = {Problem::projector_cross, Problem::projector_range};
  } else {
    throw UsageError("unknown problem '" + name + "'");
  }

  const bool full_rank = name == "dk" || name == "modulus-inv";
  const Index rank = opt.rank.value_or(full_rank ? opt.n : opt.n / 2);
  const std::uint64_t seed = resolve_seed(opt.seed);

  json config{{"problem", name},
              {"n", opt.n},
              {"rank", rank},
              {"exponent", params.exponent},
              {"trials", opt.trials},
              {"seed", seed},
              {"seed_mixing", "trial_seed = splitmix64(seed XOR trial)"},
              {"spectrum_range", json::array({opt.lo, opt.hi})},
              {"scales", opt.scales},
              {"slope_margin", opt.slope_margin},
              {"force", opt.force},
              {"noise_floor", "1e3 * machine_epsilon * (1 + ||exact||)"},
              {"error_norm", "spectral"},
              {"tolerances", tolerances_json(opt.tol)}};
  out.report["config"] = config;

  json fits = json::array();
  std::ostringstream csv;
  if (opt.want_csv) csv << "scale,error,trial\n";
  bool all_pass = true;
  Index passed = 0, total = 0;
  for (std::size_t series = 0; series < problems.size(); ++series) {
    CampaignConfig cfg;
    cfg.problem = problems[series];
    cfg.n = opt.n;
    cfg.rank = rank;
    cfg.lo = opt.lo;
    cfg.hi = opt.hi;
    cfg.params = params;
    cfg.trials = opt.trials;
    cfg.seed = seed;
    cfg.scales = opt.scales;
    cfg.slope_margin = opt.slope_margin;
    cfg.threads = opt.threads;
    cfg.tol = opt.tol;
    for (const TrialReport& t : run_campaign(cfg)) {
      json f = fit_json(t.fit);
      f["trial"] = t.trial;
      f["trial_seed"] = t.seed;
      fits.push_back(std::move(f));
      all_pass = all_pass && t.fit.pass;
      passed += t.fit.pass ? 1 : 0;
      ++total;
      if (opt.want_csv) {
        // Multi-series problems number the second series after the first.
        const Index trial_id = static_cast<Index>(series) * opt.trials + t.trial;
        for (std::size_t k = 0; k < t.fit.scales.size(); ++k)
          csv << io::format_double(t.fit.scales[k]) << "," << io::format_double(t.fit.errors[k]) << "," << trial_id
              << "\n";
      }
    }
  }
  out.report["order_fits"] = std::move(fits);
  out.exit_code = all_pass ? ok : acceptance_failure;
  out.report["summary"] = json{{"pass", all_pass}, {"passed", passed}, {"total", total}, {"exit_code", out.exit_code}};
  if (opt.want_csv) out.csv = csv.str();
  return out;
}

// ---------------------------------------------------------------- wihler

struct WihlerOptions {
  Index n = 4;
  double p = 2.0;
  Index trials = 1000;
  std::uint64_t seed = 0;
  Tolerances tol;
  std::vector<std::string> argv;
  bool timestamp = true;
};

inline Outcome cmd_wihler(const WihlerOptions& opt) {
  Outcome out;
  out.report = report_header("wihler", opt.argv, opt.timestamp);
  if (!(opt.p >= 1.0)) throw UsageError("--p must be at least 1");
  if (opt.n < 1 || opt.n > 64) throw UsageError("--n must lie in [1, 64]");
  if (opt.trials < 1) throw UsageError("--trials must be at least 1");
  const std::uint64_t seed = resolve_seed(opt.seed);
  out.report["config"] = json{{"n", opt.n},
                              {"p", opt.p},
                              {"trials", opt.trials},
                              {"seed", seed},
                              {"norm", "frobenius"},
                              {"bound", "n^((p-1)/2) * ||Z - A||_F^(1/p)"},
                              {"violation_rule", "lhs > rhs * (1 + 1e-10)"},
                              {"tolerances", tolerances_json(opt.tol)}};
  const WihlerSweep sweep = wihler_sweep(opt.n, opt.p, opt.trials, seed, opt.tol);
  json results{{"evaluations", sweep.trials + (sweep.sharpness_ratio ? 1 : 0)},
               {"violations", sweep.violations},
               {"max_ratio", sweep.max_ratio}};
  if (sweep.sharpness_ratio) results["sharpness_ratio"] = *sweep.sharpness_ratio;
  out.report["results"] = results;
  out.exit_code = sweep.violations == 0 ? ok : acceptance_failure;
  out.report["summary"] = json{{"pass", sweep.violations == 0}, {"exit_code", out.exit_code}};
  return out;
}

}  // namespace matperturb::cli
