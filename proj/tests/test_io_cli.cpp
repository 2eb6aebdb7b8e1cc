#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "matperturb/cli.hpp"
#include "test_support.hpp"

using namespace mpt;
namespace fs = std::filesystem;

namespace {

std::string fixture(const std::string& name) { return std::string(MATPERTURB_FIXTURES) + "/" + name; }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "matperturb_tests";
  fs::create_directories(dir);
  return dir / name;
}

Matrix result_matrix(const cli::Outcome& o, const char* key) {
  return io::matrix_from_json(o.report["results"][key]).data;
}

cli::ApproxOptions approx(const std::string& mode, const std::string& a, const std::string& e) {
  cli::ApproxOptions o;
  o.mode = mode;
  o.input = fixture(a);
  o.perturb = fixture(e);
  o.timestamp = false;
  return o;
}

struct SeedEnv {
  explicit SeedEnv(const char* v) { setenv("MATPERTURB_SEED", v, 1); }
  ~SeedEnv() { unsetenv("MATPERTURB_SEED"); }
};

}  // namespace

TEST(MatrixFile, LosslessRoundtrip) {
  Gen g(1);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix m = g.complex(g.integer(1, 6), g.integer(1, 6));
    m(0, 0) = cplx(1.0 / 3.0, -std::ldexp(1.0, -1070));
    const std::string text = io::to_text(io::matrix_to_json(m));
    const io::MatrixFile back = io::matrix_from_json(io::json::parse(text));
    EXPECT_EQ(back.data, m);
    EXPECT_FALSE(back.kind.has_value());
  }
}

TEST(MatrixFile, WriteAndReadFile) {
  Gen g(2);
  const Matrix h = g.hermitian(4);
  const fs::path p = scratch("h.json");
  io::write_matrix_file(p.string(), h, io::MatrixKind::hermitian);
  const io::MatrixFile back = io::read_matrix_file(p.string());
  EXPECT_EQ(back.data, h);
  EXPECT_EQ(back.kind, io::MatrixKind::hermitian);
}

TEST(MatrixFile, Validation) {
  const auto code_of = [](const std::string& text) {
    try {
      (void)io::matrix_from_json(io::json::parse(text));
    } catch (const PreconditionError& e) {
      return e.code();
    }
    return std::string("ok");
  };
  EXPECT_EQ(code_of(R"({"rows": 1, "cols": 1, "data": [[1, 0]]})"), "ok");
  EXPECT_EQ(code_of(R"({"rows": 1, "cols": 2, "data": [[1, 0]]})"), "invalid_matrix_file");
  EXPECT_EQ(code_of(R"({"rows": 1, "cols": 1, "data": [[1]]})"), "invalid_matrix_file");
  EXPECT_EQ(code_of(R"({"rows": 1, "cols": 1, "data": [["a", 0]]})"), "invalid_matrix_file");
  EXPECT_EQ(code_of(R"({"rows": 0, "cols": 1, "data": []})"), "invalid_matrix_file");
  EXPECT_EQ(code_of(R"({"cols": 1, "data": [[1, 0]]})"), "invalid_matrix_file");
  EXPECT_EQ(code_of(R"({"rows": 1, "cols": 1, "kind": "weird", "data": [[1, 0]]})"), "invalid_matrix_file");
  EXPECT_EQ(code_of(R"({"rows": 2, "cols": 2, "kind": "hermitian", "data": [[1, 0], [2, 0], [3, 0], [1, 0]]})"),
            "not_hermitian");
  EXPECT_EQ(code_of(R"({"rows": 1, "cols": 1, "kind": "psd", "data": [[-1, 0]]})"), "not_psd");
  EXPECT_EQ(code_of(R"({"rows": 1, "cols": 1, "kind": "hermitian", "data": [[1, 0.5]]})"), "not_hermitian");
}

TEST(MatrixFile, MissingFile) {
  try {
    (void)io::read_matrix_file(fixture("does_not_exist.json"));
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_EQ(e.code(), "io_error");
  }
}

TEST(FormatDouble, SeventeenDigitsAndNonFinite) {
  EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(io::format_double(2.0), "2");
  EXPECT_EQ(io::format_double(std::numeric_limits<double>::infinity()), "\"inf\"");
  EXPECT_EQ(io::format_double(-std::numeric_limits<double>::infinity()), "\"-inf\"");
  EXPECT_EQ(io::format_double(std::nan("")), "\"nan\"");
}

TEST(CmdApprox, PowerFixtureMatchesFormula) {
  auto o = approx("power", "psd_diag_1_0.json", "perturb_t001.json");
  o.p = 2.0;
  const cli::Outcome out = cli::cmd_approx(o);
  EXPECT_EQ(out.exit_code, 0);
  const Matrix golden = io::read_matrix_file(fixture("golden_power_t001.json")).data;
  EXPECT_LE(diff(result_matrix(out, "approximation"), golden), 1e-15);
  EXPECT_EQ(out.report["results"]["expected_order"], "1.5");
  EXPECT_GT(out.report["results"]["error"]["spectral"].get<double>(), 0.0);
}

TEST(CmdApprox, DkOnSingularInputFails) {
  auto o = approx("dk", "psd_diag_1_0.json", "perturb_t001.json");
  try {
    (void)cli::cmd_approx(o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "kernel_present");
    EXPECT_EQ(cli::exit_code_for(e), 1);
  }
}

TEST(CmdApprox, ModulusOfZeroX) {
  const cli::Outcome out = cli::cmd_approx(approx("modulus", "zero_3.json", "general_z3.json"));
  const Matrix golden = io::read_matrix_file(fixture("golden_modulus_zero_x.json")).data;
  EXPECT_LE(diff(result_matrix(out, "approximation"), golden), 1e-12);
  EXPECT_LE(out.report["results"]["error"]["spectral"].get<double>(), 1e-12);
}

TEST(CmdApprox, PowerSAndModulusPsdModes) {
  auto o = approx("power-s", "psd_diag_1_0.json", "perturb_diag_0_004.json");
  o.s = 2.0;
  EXPECT_LE(cli::cmd_approx(o).report["results"]["error"]["spectral"].get<double>(), 1e-15);
  const cli::Outcome m = cli::cmd_approx(approx("modulus-psd", "psd_diag_1_0.json", "perturb_diag_0_004.json"));
  EXPECT_LE(m.report["results"]["error"]["spectral"].get<double>(), 1e-15);
}

TEST(CmdApprox, MissingExponentIsUsageError) {
  EXPECT_THROW(cli::cmd_approx(approx("power", "psd_diag_1_0.json", "perturb_t001.json")), cli::UsageError);
}

TEST(CmdApprox, ByteIdenticalWithoutTimestamp) {
  auto o = approx("power", "psd_diag_1_0.json", "perturb_t001.json");
  o.p = 2.0;
  EXPECT_EQ(io::to_text(cli::cmd_approx(o).report), io::to_text(cli::cmd_approx(o).report));
  o.timestamp = true;
  EXPECT_TRUE(cli::cmd_approx(o).report.contains("timestamp"));
}

TEST(CmdOrder, PowerCampaignPasses) {
  cli::OrderOptions o;
  o.problem = "power";
  o.p = 2.0;
  o.seed = 42;
  o.timestamp = false;
  o.want_csv = true;
  const cli::Outcome out = cli::cmd_order(o);
  EXPECT_EQ(out.exit_code, 0);
  EXPECT_EQ(out.report["summary"]["passed"], 10);
  for (const auto& f : out.report["order_fits"]) EXPECT_GE(f["fitted_slope"].get<double>(), 1.45);
  EXPECT_EQ(out.csv.substr(0, out.csv.find('\n')), "scale,error,trial");
  EXPECT_EQ(std::count(out.csv.begin(), out.csv.end(), '\n'), 1 + 10 * 12);
}

TEST(CmdOrder, DkFullRank) {
  cli::OrderOptions o;
  o.problem = "dk";
  o.n = 5;
  o.timestamp = false;
  const cli::Outcome out = cli::cmd_order(o);
  EXPECT_EQ(out.report["config"]["rank"], 5);
  for (const auto& f : out.report["order_fits"]) EXPECT_GE(f["fitted_slope"].get<double>(), 1.95);
}

TEST(CmdOrder, ValidationErrors) {
  cli::OrderOptions o;
  o.problem = "power";
  o.scales = {0.1, 0.05, 0.025};
  EXPECT_THROW(cli::cmd_order(o), cli::UsageError);
  o.scales = default_scales();
  o.p = 3.5;
  EXPECT_THROW(cli::cmd_order(o), cli::UsageError);
  o.p = 0.8;
  EXPECT_THROW(cli::cmd_order(o), cli::UsageError);
  o.problem = "nope";
  EXPECT_THROW(cli::cmd_order(o), cli::UsageError);
}

TEST(CmdOrder, ForceAllowsLargeP) {
  cli::OrderOptions o;
  o.problem = "power";
  o.p = 3.5;
  o.force = true;
  o.trials = 2;
  o.timestamp = false;
  const cli::Outcome out = cli::cmd_order(o);
  EXPECT_EQ(out.exit_code, 0);
  EXPECT_EQ(out.report["order_fits"][0]["expected_order"], "unguaranteed");
}

TEST(CmdOrder, TwoSeriesForProjectorProducts) {
  cli::OrderOptions o;
  o.problem = "lemma-gt2";
  o.trials = 3;
  o.timestamp = false;
  o.want_csv = true;
  const cli::Outcome out = cli::cmd_order(o);
  EXPECT_EQ(out.report["order_fits"].size(), 6u);
  EXPECT_NE(out.csv.find(",5\n"), std::string::npos);
}

TEST(CmdOrder, ReproducibleAndSeedEnvOverride) {
  cli::OrderOptions o;
  o.problem = "modulus";
  o.trials = 3;
  o.seed = 5;
  o.timestamp = false;
  const std::string a = io::to_text(cli::cmd_order(o).report);
  o.threads = 3;
  const std::string b = io::to_text(cli::cmd_order(o).report);
  EXPECT_EQ(a, b);
  {
    SeedEnv env("77");
    const cli::Outcome out = cli::cmd_order(o);
    EXPECT_EQ(out.report["config"]["seed"], 77);
  }
  {
    SeedEnv env("x7");
    EXPECT_THROW(cli::cmd_order(o), cli::UsageError);
  }
}

TEST(CmdWihler, Examples) {
  cli::WihlerOptions o;
  o.n = 1;
  o.p = 2;
  o.trials = 50;
  o.timestamp = false;
  const cli::Outcome one = cli::cmd_wihler(o);
  EXPECT_EQ(one.exit_code, 0);
  EXPECT_LE(one.report["results"]["max_ratio"].get<double>(), 1 + 1e-10);
  EXPECT_GE(one.report["results"]["sharpness_ratio"].get<double>(), 1 - 1e-10);

  o.n = 8;
  o.p = 3;
  o.trials = 1000;
  const cli::Outcome eight = cli::cmd_wihler(o);
  EXPECT_EQ(eight.report["results"]["violations"], 0);

  o.p = 0.5;
  EXPECT_THROW(cli::cmd_wihler(o), cli::UsageError);
}
