#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "boussinesq/cli.hpp"

using namespace bsq;
using namespace bsq::cli;
namespace fs = std::filesystem;

namespace {

// Scratch directory removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& name) : path_(fs::temp_directory_path() / ("boussinesq_cli_" + name)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~ScratchDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& leaf) const { return path_ / leaf; }

 private:
  fs::path path_;
};

void write_text(const fs::path& path, const std::string& text) { std::ofstream(path) << text; }

std::string read_text(const fs::path& path) {
  std::ifstream file(path, std::ios::binary);
  std::ostringstream out;
  out << file.rdbuf();
  return out.str();
}

// Runs the built executable; returns its exit status.
int run_cli(const std::string& arguments, const fs::path& stderr_path) {
  const char* binary = std::getenv("BOUSSINESQ_CLI");
  if (binary == nullptr) throw std::runtime_error("BOUSSINESQ_CLI is not set");
  const std::string command = std::string(binary) + " " + arguments + " 2> " + stderr_path.string();
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::size_t count_lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST(Config, DefaultsAndGridForms) {
  const RunConfig config = parse_config(R"({
    "tau_grid": {"start": 0.0, "stop": 0.3, "count": 4},
    "x_grid": {"start": 10, "stop": 1000, "count": 3, "spacing": "log"},
    "verify": {"model_q": [0.1, [0.5, 0.2]]}
  })");
  EXPECT_EQ(config.arc_points, 65u);
  ASSERT_EQ(config.tau_grid.size(), 4u);
  EXPECT_DOUBLE_EQ(config.tau_grid[3], 0.3);
  ASSERT_EQ(config.x_grid.size(), 3u);
  EXPECT_NEAR(config.x_grid[1], 100.0, 1e-12);
  ASSERT_EQ(config.model_q.size(), 2u);
  EXPECT_EQ(config.model_q[1], cplx(0.5, 0.2));
  EXPECT_FALSE(config.initial_data.has_value());
}

TEST(Config, InvariantsCarryTheLine) {
  const auto message = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& error) {
      return std::string(error.what());
    }
    return std::string("accepted");
  };
  EXPECT_EQ(message("{\n  \"arc_points\": 31\n}"), "config line 2: arc_points: must be at least 32");
  EXPECT_EQ(message("{\n\n  \"tau_max\": 0.2,\n  \"tau_grid\": [0.1, 0.25]\n}"),
            "config line 4: tau_grid: values must lie in [0, tau_max]");
  EXPECT_EQ(message("{\n  \"x_grid\": [1.5, 10]\n}"), "config line 2: x_grid: values must be at least 2");
  EXPECT_EQ(message("{\n  \"initial_data\": {\n    \"family\": \"cubic\"\n  }\n}"),
            "config line 3: initial_data.family: expected zero, gaussian, sech2, table or bump");
  EXPECT_EQ(message("{\n  \"oracle\": {\"xi_max\": 0.95}\n}"), "config line 2: oracle.xi_max: must lie in (0, 0.9]");
  EXPECT_EQ(message("{\"unknown\": 1}"), "config line 1: unknown: unknown key");
  EXPECT_NE(message("{\"arc_points\": 40,").find("line 1"), std::string::npos);
  EXPECT_EQ(message("{\"arc_points\": 32}"), "accepted");
}

TEST(Config, SuiteNames) {
  EXPECT_EQ(parse_suites("all").size(), 5u);
  EXPECT_EQ(parse_suites("model-rh").front(), Suite::model_rh);
  EXPECT_THROW(parse_suites("everything"), ConfigError);
}

TEST(Scatter, ZeroDataGivesAllZeroCsv) {
  RunConfig config;
  config.initial_data = DataSpec{};
  config.initial_data->family = DataFamily::zero;
  config.arc_points = 32;
  std::istringstream in(scatter_csv(config, 1));
  const SpectralData spec = read_csv(in);
  ASSERT_EQ(spec.theta().size(), 32u);
  for (std::size_t i = 0; i < 32; ++i) {
    EXPECT_EQ(spec.r1()[i], cplx(0.0));
    EXPECT_EQ(spec.r2()[i], cplx(0.0));
  }
}

TEST(Scatter, GaussianCsvPassesInvariantsOnReload) {
  const ScratchDir dir("scatter");
  write_text(dir / "run.json", R"({"initial_data": {"family": "gaussian"}, "arc_points": 33, "threads": 4})");
  ASSERT_EQ(run_cli("scatter --config " + (dir / "run.json").string() + " --out " + (dir / "spec.csv").string(),
                    dir / "err.txt"),
            0)
      << read_text(dir / "err.txt");
  std::ifstream in(dir / "spec.csv");
  const SpectralData spec = read_csv(in);
  EXPECT_EQ(spec.source(), SpectralSource::computed);
  EXPECT_EQ(spec.theta().size(), 33u);
  EXPECT_LT(spec.conjugation_defect(), 1e-6);
  EXPECT_GT(spec.min_one_plus_product(), 1.0);
}

TEST(Scatter, MalformedJsonLeavesNoOutput) {
  const ScratchDir dir("malformed");
  write_text(dir / "run.json", "{\"initial_data\": {\"family\": \"gaussian\"},");
  EXPECT_EQ(run_cli("scatter --config " + (dir / "run.json").string() + " --out " + (dir / "spec.csv").string(),
                    dir / "err.txt"),
            2);
  EXPECT_NE(read_text(dir / "err.txt").find("malformed JSON"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir / "spec.csv"));
  EXPECT_FALSE(fs::exists(dir / "spec.csv.partial"));
}

TEST(Asymptote, TauZeroRowsAndSectorSkips) {
  const ScratchDir dir("asymptote");
  write_text(dir / "run.json", R"({
    "initial_data": {"family": "bump"},
    "arc_points": 257,
    "tau_grid": [0.0, 0.15],
    "x_grid": [5, 50, 500]
  })");
  const std::string args = "asymptote --config " + (dir / "run.json").string() + " --out ";
  ASSERT_EQ(run_cli(args + (dir / "first.csv").string(), dir / "err.txt"), 0);
  const std::string diagnostics = read_text(dir / "err.txt");
  // x = 5 lies below the asymptotic x_min for both tau values.
  EXPECT_EQ(count_lines(diagnostics), 2u);
  EXPECT_NE(diagnostics.find("skipped row x=5"), std::string::npos);

  const std::string table = read_text(dir / "first.csv");
  EXPECT_EQ(count_lines(table), 5u);
  std::istringstream lines(table);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "x,tau,t,nu,A,alpha_wrapped,alpha_unwrapped,u_leading,xN_term,log_term,arg_d0_mismatch,warning");
  std::getline(lines, line);
  EXPECT_EQ(line.rfind("50,0,0,0,0,nan,nan,0,", 0), 0u) << line;

  ASSERT_EQ(run_cli(args + (dir / "second.csv").string(), dir / "err2.txt"), 0);
  EXPECT_EQ(read_text(dir / "second.csv"), table);
}

TEST(Asymptote, RouteMismatchPopulatesWarning) {
  RunConfig config;
  config.initial_data = DataSpec{};
  config.initial_data->family = DataFamily::bump;
  config.arc_points = 257;
  config.tau_grid = {0.15};
  config.x_grid = {50.0, 500.0};
  std::ostringstream diagnostics;
  const auto warnings = [&](const RunConfig& run) {
    std::istringstream in(asymptote_csv(run, 1, diagnostics));
    std::string line;
    std::getline(in, line);
    std::size_t flagged = 0;
    while (std::getline(in, line)) flagged += line.back() != ',';
    return flagged;
  };
  EXPECT_EQ(warnings(config), 0u);
  // The two routes agree to rounding only, so a zero tolerance flags every row.
  config.tolerances.route_mismatch = 0.0;
  EXPECT_EQ(warnings(config), 2u);
  EXPECT_TRUE(diagnostics.str().empty());
}

TEST(Verify, ModelRhOnTrivialDataPasses) {
  const ScratchDir dir("verify_q0");
  write_text(dir / "run.json", R"({"verify": {"model_q": [0]}})");
  ASSERT_EQ(run_cli("verify --suite model-rh --config " + (dir / "run.json").string() + " --out " +
                        (dir / "report.json").string(),
                    dir / "err.txt"),
            0);
  const nlohmann::json report = nlohmann::json::parse(read_text(dir / "report.json"));
  EXPECT_TRUE(report["passed"].get<bool>());
  for (const auto& check : report["checks"]) EXPECT_EQ(check["max_residual"].get<double>(), 0.0);
}

TEST(Verify, DeformFactorizationsBelowTolerance) {
  const SuiteReport report = run_suite(Suite::deform, RunConfig{}, 2);
  std::size_t factorizations = 0;
  for (const CheckResult& check : report.checks) {
    EXPECT_TRUE(check.passed) << check.name;
    if (check.name.rfind("factorization ", 0) == 0) {
      ++factorizations;
      EXPECT_LT(check.max_residual, 1e-10) << check.name;
      EXPECT_EQ(check.samples, 100u);
    }
  }
  EXPECT_EQ(factorizations, 10u);
}

TEST(Verify, FailureAndUsageExitCodes) {
  const ScratchDir dir("verify_codes");
  write_text(dir / "strict.json", R"({"tolerances": {"beta_product": 0.0, "model_jump": 0.0}})");
  EXPECT_EQ(run_cli("verify --suite model-rh --config " + (dir / "strict.json").string() + " --out " +
                        (dir / "report.json").string(),
                    dir / "err.txt"),
            1);
  EXPECT_FALSE(nlohmann::json::parse(read_text(dir / "report.json"))["passed"].get<bool>());
  EXPECT_EQ(run_cli("verify --suite nonsense", dir / "err.txt"), 2);
  EXPECT_NE(read_text(dir / "err.txt").find("unknown suite"), std::string::npos);
  EXPECT_EQ(run_cli("scatter", dir / "err.txt"), 2);
  EXPECT_EQ(run_cli("frobnicate", dir / "err.txt"), 2);
}

TEST(Oracle, SnapshotsPerRequestedTime) {
  const ScratchDir dir("oracle");
  write_text(dir / "run.json", R"({
    "initial_data": {"family": "gaussian", "u0": {"amplitude": 0.01}, "envelope": {"amplitude": 0.005}},
    "oracle": {"times": [0.0, 0.5], "grid": {"points": 512}}
  })");
  ASSERT_EQ(run_cli("oracle --config " + (dir / "run.json").string() + " --out " + (dir / "snap.csv").string(),
                    dir / "err.txt"),
            0)
      << read_text(dir / "err.txt");
  for (const char* name : {"snap.0.csv", "snap.1.csv"}) {
    const std::string text = read_text(dir / name);
    EXPECT_EQ(text.rfind("x,u,ut\n", 0), 0u);
    EXPECT_EQ(count_lines(text), 513u);
  }
  // The t = 0 snapshot holds the data samples themselves.
  const InitialData data =
      InitialData::shaped(ProfileShape::gaussian, {0.01, 1.0, 0.0}, {0.005, 1.0, 0.0});
  std::istringstream first(read_text(dir / "snap.0.csv"));
  std::string line;
  std::getline(first, line);
  for (int row = 0; row < 512 && std::getline(first, line); ++row) {
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double x, u, ut;
    fields >> x >> u >> ut;
    EXPECT_EQ(u, data.sample(x).u0);
    EXPECT_EQ(ut, data.sample(x).u1);
  }
}
