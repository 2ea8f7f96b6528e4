#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "boussinesq/initial_data.hpp"
#include "boussinesq/pde.hpp"
#include "boussinesq/spectral.hpp"

namespace bsq::cli {

enum class ExitCode : int { success = 0, verification_failure = 1, usage_error = 2 };

// bump is a spectral-side family: synthetic r1 with no initial data behind it.
enum class DataFamily { zero, gaussian, sech2, table, bump };

struct DataSpec {
  DataFamily family = DataFamily::gaussian;
  ProfileParams u0{0.3, 1.0, 0.0};
  ProfileParams envelope{0.2, 1.0, 0.0};
  XGrid grid;
  std::filesystem::path table;  // CSV x,u0,u1 for the table family
  BumpProfile bump;
};

struct Tolerances {
  double mass = 1e-10;
  double decay = 1e-14;
  double circle_relation = 1e-6;
  double conjugation = 1e-6;
  double endpoint = 1e-3;
  double delta_jump = 1e-6;
  double delta_modulus = 1e-8;
  double delta33_moment = 1e-6;
  double d0_modulus = 1e-8;
  double route_mismatch = 1e-6;
  double model_jump = 1e-8;
  double model_coefficient = 1e-4;
  double beta_product = 1e-12;
  double gamma_identity = 1e-12;
  double factorization = 1e-10;
  double determinant = 1e-10;
  double symmetry = 1e-6;
  double dispersion = 1e-6;
  double reversal = 1e-8;
};

struct OracleSection {
  std::vector<double> times{1.0};
  PdeOptions options;
  PeriodicGrid grid;
};

struct OutputPaths {
  std::filesystem::path scatter, asymptote, verify, oracle;
};

// One record for every subcommand. Invariants: arc_points >= 32,
// tau_grid inside [0, tau_max], min x_grid >= 2.
struct RunConfig {
  std::optional<DataSpec> initial_data;
  std::optional<std::filesystem::path> spectral_input;
  std::size_t arc_points = 65;
  double theta_end = 2.0 * pi / 3.0 - 0.05;  // computed data keep 0.05 from the r2 pole
  double tau_max = 0.3;
  std::vector<double> tau_grid;
  std::vector<double> x_grid;
  int order_N = 2;
  double asymptotic_x_min = 10.0;
  double verify_tau = 0.15;
  std::vector<cplx> model_q{cplx(0.1, 0.0), cplx(0.5, 0.2), cplx(2.0, 0.0)};
  Tolerances tolerances;
  OracleSection oracle;
  OutputPaths outputs;
  int threads = 1;
};

// Errors are ConfigError naming the line of the offending entry.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

InitialData make_initial_data(const DataSpec& spec);
// Spectral input file when given, otherwise the configured data on the arc grid.
SpectralData make_spectral(const RunConfig& config, int threads);

enum class Suite { scattering, parametrix, deform, model_rh, pde };

// "all" expands to every suite; unknown names throw ConfigError.
std::vector<Suite> parse_suites(std::string_view name);
std::string_view to_string(Suite suite);

struct CheckResult {
  std::string suite;
  std::string name;
  double max_residual = 0.0;
  std::size_t samples = 0;
  double tolerance = 0.0;
  bool passed = false;
};

struct SuiteReport {
  std::vector<CheckResult> checks;
  std::vector<std::string> notes;
};

SuiteReport run_suite(Suite suite, const RunConfig& config, int threads);

// Command bodies; each returns the complete file contents so that a failure leaves no partial output.
std::string scatter_csv(const RunConfig& config, int threads);
// Rows outside the asymptotic sector are reported to `diagnostics` and skipped.
std::string asymptote_csv(const RunConfig& config, int threads, std::ostream& diagnostics);
std::string verify_json(std::span<const Suite> suites, const RunConfig& config, int threads, bool& passed);

// Entry point behind the executable; args excludes the program name.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace bsq::cli
