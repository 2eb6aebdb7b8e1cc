// matperturb: first-order perturbation formulas for matrix powers and the
// matrix modulus, with empirical order checks.
//
//   matperturb approx --mode power --p 2 --input A.json --perturb E.json --out report.json
//   matperturb order  --problem power --p 2 --n 6 --rank 3 --trials 10 --seed 42
//   matperturb wihler --n 8 --p 3 --trials 1000

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "matperturb/cli.hpp"

namespace {

using namespace matperturb;
using cli::json;

void add_tolerance_flags(CLI::App* cmd, Tolerances& tol) {
  cmd->add_option("--hermitian-tol", tol.hermitian, "Hermiticity tolerance")->capture_default_str();
  cmd->add_option("--psd-tol", tol.psd, "PSD clipping tolerance")->capture_default_str();
  cmd->add_option("--rank-tol", tol.rank, "relative numerical-rank threshold")->capture_default_str();
  cmd->add_option("--pair-tol", tol.pair, "coincident-eigenvalue tolerance")->capture_default_str();
}

int emit(const cli::Outcome& outcome, const std::string& out_path, const std::string& csv_path) {
  const std::string text = io::to_text(outcome.report);
  if (out_path.empty()) std::cout << text;
  else io::write_text(out_path, text);
  if (!csv_path.empty()) io::write_text(csv_path, outcome.csv);
  return outcome.exit_code;
}

int fail(const Error& e, const std::string& command, const std::vector<std::string>& argv, bool timestamp,
         const std::string& out_path) {
  std::cerr << json{{"error", cli::error_json(e)}}.dump() << "\n";
  const int code = cli::exit_code_for(e);
  if (!out_path.empty()) {
    json report = cli::report_header(command, argv, timestamp);
    report["error"] = cli::error_json(e);
    report["summary"] = json{{"pass", false}, {"exit_code", code}};
    try {
      io::write_text(out_path, io::to_text(report));
    } catch (const Error&) {
    }
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  CLI::App app{"First-order perturbation of matrix powers and the matrix modulus"};
  app.set_version_flag("--version", std::string(cli::kVersion));
  app.require_subcommand(1);

  bool no_timestamp = false;
  std::string out_path;
  std::string csv_path;

  cli::ApproxOptions approx;
  auto* approx_cmd = app.add_subcommand("approx", "first-order approximation for a given matrix pair");
  approx_cmd->add_option("--mode", approx.mode, "dk | power | power-s | modulus | modulus-psd | modulus-inv")
      ->required()
      ->check(CLI::IsMember({"dk", "power", "power-s", "modulus", "modulus-psd", "modulus-inv"}));
  approx_cmd->add_option("--input", approx.input, "matrix file for A (or X)")->required();
  approx_cmd->add_option("--perturb", approx.perturb, "matrix file for E (or Z)")->required();
  approx_cmd->add_option("--p", approx.p, "root index p, computes (A+E)^(1/p)");
  approx_cmd->add_option("--s", approx.s, "exponent s");
  approx_cmd->add_option("--out", out_path, "report file (stdout when omitted)");
  approx_cmd->add_flag("--no-timestamp", no_timestamp, "omit the timestamp field");
  add_tolerance_flags(approx_cmd, approx.tol);

  cli::OrderOptions order;
  Index rank = -1;
  std::vector<double> scales;
  auto* order_cmd = app.add_subcommand("order", "empirical error-order campaign against the exact oracle");
  order_cmd->add_option("--problem", order.problem, "dk | power | power-s | modulus | modulus-psd | modulus-inv | lemma-gt | lemma-gt1 | lemma-gt2")
      ->required();
  order_cmd->add_option("--n", order.n, "dimension")->capture_default_str();
  order_cmd->add_option("--rank", rank, "rank of the base matrix (default n/2, or n for dk and modulus-inv)");
  order_cmd->add_option("--p", order.p, "root index p");
  order_cmd->add_option("--s", order.s, "exponent s");
  order_cmd->add_option("--trials", order.trials, "number of seeded trials")->capture_default_str();
  order_cmd->add_option("--seed", order.seed, "campaign seed (MATPERTURB_SEED overrides)")->capture_default_str();
  order_cmd->add_option("--scales", scales, "strictly decreasing scales, at least 6")->delimiter(',');
  order_cmd->add_option("--lo", order.lo, "lower end of the nonzero spectrum")->capture_default_str();
  order_cmd->add_option("--hi", order.hi, "upper end of the nonzero spectrum")->capture_default_str();
  order_cmd->add_option("--slope-margin", order.slope_margin, "allowed shortfall of the fitted slope")->capture_default_str();
  order_cmd->add_option("--threads", order.threads, "worker threads")->capture_default_str();
  order_cmd->add_flag("--force", order.force, "allow p >= 3 (no guaranteed order)");
  order_cmd->add_option("--out", out_path, "report file (stdout when omitted)");
  order_cmd->add_option("--csv", csv_path, "write scale,error,trial table");
  order_cmd->add_flag("--no-timestamp", no_timestamp, "omit the timestamp field");
  add_tolerance_flags(order_cmd, order.tol);

  cli::WihlerOptions wihler;
  auto* wihler_cmd = app.add_subcommand("wihler", "random sweep of the Hoelder bound for matrix roots");
  wihler_cmd->add_option("--n", wihler.n, "dimension")->capture_default_str();
  wihler_cmd->add_option("--p", wihler.p, "root index, p >= 1")->capture_default_str();
  wihler_cmd->add_option("--trials", wihler.trials, "number of random pairs")->capture_default_str();
  wihler_cmd->add_option("--seed", wihler.seed, "sweep seed (MATPERTURB_SEED overrides)")->capture_default_str();
  wihler_cmd->add_option("--out", out_path, "report file (stdout when omitted)");
  wihler_cmd->add_flag("--no-timestamp", no_timestamp, "omit the timestamp field");
  add_tolerance_flags(wihler_cmd, wihler.tol);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::precondition_failure;
  }

  std::string command;
  try {
    if (*approx_cmd) {
      command = "approx";
      approx.argv = args;
      approx.timestamp = !no_timestamp;
      return emit(cli::cmd_approx(approx), out_path, "");
    }
    if (*order_cmd) {
      command = "order";
      order.argv = args;
      order.timestamp = !no_timestamp;
      if (rank >= 0) order.rank = rank;
      if (!scales.empty()) order.scales = scales;
      order.want_csv = !csv_path.empty();
      return emit(cli::cmd_order(order), out_path, csv_path);
    }
    command = "wihler";
    wihler.argv = args;
    wihler.timestamp = !no_timestamp;
    return emit(cli::cmd_wihler(wihler), out_path, "");
  } catch (const Error& e) {
    return fail(e, command, args, !no_timestamp, out_path);
  } catch (const std::exception& e) {
    return fail(NumericalError("internal", e.what()), command, args, !no_timestamp, out_path);
  }
}
