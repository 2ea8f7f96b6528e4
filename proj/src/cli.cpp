#include "boussinesq/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "boussinesq/asymptotics.hpp"
#include "boussinesq/jumps.hpp"
#include "boussinesq/model_rh.hpp"
#include "boussinesq/parallel.hpp"
#include "boussinesq/parametrix.hpp"
#include "boussinesq/special.hpp"

namespace bsq::cli {

namespace {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration parsing

// A JSON value together with its key path, for error messages.
struct Node {
  const json* value;
  std::vector<std::string> path;

  std::string dotted() const {
    std::string out;
    for (const std::string& key : path) out += (out.empty() || key.front() == '[' ? "" : ".") + key;
    return out.empty() ? "<root>" : out;
  }
};

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  // nlohmann keeps no source positions, so the line is found by scanning for
  // each quoted key of the path in order.
  std::size_t line_of(const Node& node) const {
    std::size_t offset = 0;
    for (const std::string& key : node.path) {
      if (key.front() == '[') continue;
      const std::size_t found = text_.find('"' + key + '"', offset);
      if (found == std::string_view::npos) break;
      offset = found;
    }
    return 1 + static_cast<std::size_t>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
  }

  [[noreturn]] void fail(const Node& node, const std::string& message) const {
    throw ConfigError("config line " + std::to_string(line_of(node)) + ": " + node.dotted() + ": " + message);
  }

  Node child(const Node& parent, const std::string& key) const {
    Node node{&(*parent.value)[key], parent.path};
    node.path.push_back(key);
    return node;
  }

  Node element(const Node& parent, std::size_t index) const {
    Node node{&(*parent.value)[index], parent.path};
    node.path.push_back("[" + std::to_string(index) + "]");
    return node;
  }

  std::optional<Node> find(const Node& parent, const std::string& key) const {
    if (!parent.value->contains(key)) return std::nullopt;
    return child(parent, key);
  }

  void expect_object(const Node& node, std::initializer_list<std::string_view> keys) const {
    if (!node.value->is_object()) fail(node, "expected an object");
    for (const auto& item : node.value->items())
      if (std::find(keys.begin(), keys.end(), item.key()) == keys.end()) fail(child(node, item.key()), "unknown key");
  }

  double number(const Node& node) const {
    if (!node.value->is_number()) fail(node, "expected a number");
    const double value = node.value->get<double>();
    if (!std::isfinite(value)) fail(node, "expected a finite number");
    return value;
  }

  long long integer(const Node& node) const {
    if (!node.value->is_number_integer()) fail(node, "expected an integer");
    return node.value->get<long long>();
  }

  std::string string(const Node& node) const {
    if (!node.value->is_string()) fail(node, "expected a string");
    return node.value->get<std::string>();
  }

  // A list of numbers, or {"start", "stop", "count", "spacing": "linear" | "log"}.
  std::vector<double> grid(const Node& node) const {
    std::vector<double> values;
    if (node.value->is_array()) {
      for (std::size_t i = 0; i < node.value->size(); ++i) values.push_back(number(element(node, i)));
      return values;
    }
    expect_object(node, {"start", "stop", "count", "spacing"});
    for (const char* key : {"start", "stop", "count"})
      if (!node.value->contains(key)) fail(node, std::string("missing key ") + key);
    const double start = number(child(node, "start"));
    const double stop = number(child(node, "stop"));
    const long long count = integer(child(node, "count"));
    if (count < 1) fail(child(node, "count"), "must be positive");
    const std::string spacing = node.value->contains("spacing") ? string(child(node, "spacing")) : "linear";
    if (spacing != "linear" && spacing != "log") fail(child(node, "spacing"), "expected linear or log");
    if (spacing == "log" && !(start > 0.0 && stop > 0.0)) fail(node, "log spacing needs positive ends");
    for (long long i = 0; i < count; ++i) {
      const double share = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
      values.push_back(spacing == "log" ? start * std::pow(stop / start, share) : start + (stop - start) * share);
    }
    return values;
  }

  cplx complex(const Node& node) const {
    if (node.value->is_number()) return number(node);
    if (!node.value->is_array() || node.value->size() != 2) fail(node, "expected a number or [re, im]");
    return {number(element(node, 0)), number(element(node, 1))};
  }

 private:
  std::string_view text_;
};

ProfileParams read_profile(const Reader& reader, const Node& node, ProfileParams profile) {
  reader.expect_object(node, {"amplitude", "width", "center"});
  if (auto v = reader.find(node, "amplitude")) profile.amplitude = reader.number(*v);
  if (auto v = reader.find(node, "width")) {
    profile.width = reader.number(*v);
    if (!(profile.width > 0.0)) reader.fail(*v, "must be positive");
  }
  if (auto v = reader.find(node, "center")) profile.center = reader.number(*v);
  return profile;
}

DataSpec read_data(const Reader& reader, const Node& node) {
  reader.expect_object(node, {"family", "u0", "envelope", "grid", "table", "bump"});
  DataSpec spec;
  if (auto v = reader.find(node, "family")) {
    const std::string family = reader.string(*v);
    if (family == "zero") spec.family = DataFamily::zero;
    else if (family == "gaussian") spec.family = DataFamily::gaussian;
    else if (family == "sech2") spec.family = DataFamily::sech2;
    else if (family == "table") spec.family = DataFamily::table;
    else if (family == "bump") spec.family = DataFamily::bump;
    else reader.fail(*v, "expected zero, gaussian, sech2, table or bump");
  }
  if (auto v = reader.find(node, "u0")) spec.u0 = read_profile(reader, *v, spec.u0);
  if (auto v = reader.find(node, "envelope")) spec.envelope = read_profile(reader, *v, spec.envelope);
  if (auto v = reader.find(node, "grid")) {
    reader.expect_object(*v, {"x_min", "x_max", "points"});
    if (auto w = reader.find(*v, "x_min")) spec.grid.x_min = reader.number(*w);
    if (auto w = reader.find(*v, "x_max")) spec.grid.x_max = reader.number(*w);
    if (auto w = reader.find(*v, "points")) {
      const long long points = reader.integer(*w);
      if (points < 16) reader.fail(*w, "needs at least 16 points");
      spec.grid.points = static_cast<std::size_t>(points);
    }
    if (!(spec.grid.x_max > spec.grid.x_min)) reader.fail(*v, "x_max must exceed x_min");
  }
  if (auto v = reader.find(node, "table")) spec.table = reader.string(*v);
  if (spec.family == DataFamily::table && spec.table.empty()) reader.fail(node, "table family needs a table path");
  if (auto v = reader.find(node, "bump")) {
    reader.expect_object(*v, {"amplitude", "decay", "phase_offset", "phase_slope"});
    if (auto w = reader.find(*v, "amplitude")) spec.bump.amplitude = reader.number(*w);
    if (auto w = reader.find(*v, "decay")) spec.bump.decay = reader.number(*w);
    if (auto w = reader.find(*v, "phase_offset")) spec.bump.phase_offset = reader.number(*w);
    if (auto w = reader.find(*v, "phase_slope")) spec.bump.phase_slope = reader.number(*w);
    if (!(spec.bump.decay > 0.0)) reader.fail(*v, "decay must be positive");
  }
  return spec;
}

Tolerances read_tolerances(const Reader& reader, const Node& node) {
  Tolerances tol;
  const std::vector<std::pair<std::string_view, double*>> fields{
      {"mass", &tol.mass},
      {"decay", &tol.decay},
      {"circle_relation", &tol.circle_relation},
      {"conjugation", &tol.conjugation},
      {"endpoint", &tol.endpoint},
      {"delta_jump", &tol.delta_jump},
      {"delta_modulus", &tol.delta_modulus},
      {"delta33_moment", &tol.delta33_moment},
      {"d0_modulus", &tol.d0_modulus},
      {"route_mismatch", &tol.route_mismatch},
      {"model_jump", &tol.model_jump},
      {"model_coefficient", &tol.model_coefficient},
      {"beta_product", &tol.beta_product},
      {"gamma_identity", &tol.gamma_identity},
      {"factorization", &tol.factorization},
      {"determinant", &tol.determinant},
      {"symmetry", &tol.symmetry},
      {"dispersion", &tol.dispersion},
      {"reversal", &tol.reversal}};
  if (!node.value->is_object()) reader.fail(node, "expected an object");
  for (const auto& item : node.value->items()) {
    const auto match = std::find_if(fields.begin(), fields.end(), [&](const auto& f) { return f.first == item.key(); });
    const Node entry = reader.child(node, item.key());
    if (match == fields.end()) reader.fail(entry, "unknown tolerance");
    *match->second = reader.number(entry);
    if (*match->second < 0.0) reader.fail(entry, "tolerances are non-negative");
  }
  return tol;
}

std::filesystem::path read_out(const Reader& reader, const Node& section) {
  if (auto v = reader.find(section, "out")) return reader.string(*v);
  return {};
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  std::ostringstream out;
  out << std::setprecision(17) << value;
  return out.str();
}

// Writes beside the target and renames, so readers never see a partial file.
void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path staging = path;
  staging += ".partial";
  {
    std::ofstream file(staging, std::ios::binary);
    if (!file) throw ConfigError("cannot write " + path.string());
    file << content;
    if (!file) throw ConfigError("write failed for " + path.string());
  }
  std::filesystem::rename(staging, path);
}

void emit(const std::filesystem::path& path, const std::string& content, std::ostream& out) {
  if (path.empty())
    out << content;
  else
    write_file(path, content);
}

InitialData read_table(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("cannot open initial-data table " + path.string());
  std::vector<double> x, u0, u1;
  std::string line;
  std::size_t number = 0;
  while (std::getline(file, line)) {
    ++number;
    if (line.empty() || line[0] == '#' || (number == 1 && line == "x,u0,u1")) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double a, b, c;
    if (!(fields >> a >> b >> c))
      throw ConfigError(path.string() + " line " + std::to_string(number) + ": expected three numeric columns");
    x.push_back(a);
    u0.push_back(b);
    u1.push_back(c);
  }
  return InitialData::from_table(x, u0, u1);
}

// ---------------------------------------------------------------------------
// Verification suites

class Checks {
 public:
  explicit Checks(std::string suite) : suite_(std::move(suite)) {}

  void add(std::string name, double residual, std::size_t samples, double tolerance) {
    report_.checks.push_back({suite_, std::move(name), residual, samples, tolerance, residual <= tolerance});
  }
  void note(std::string text) { report_.notes.push_back(suite_ + ": " + std::move(text)); }
  SuiteReport take() { return std::move(report_); }

 private:
  std::string suite_;
  SuiteReport report_;
};

InitialData gaussian_fixture() {
  return InitialData::shaped(ProfileShape::gaussian, {0.3, 1.0, 0.0}, {0.2, 1.0, 0.0});
}

bool has_initial_data(const RunConfig& config) {
  return config.initial_data && config.initial_data->family != DataFamily::bump;
}

SuiteReport scattering_suite(const RunConfig& config, int threads) {
  Checks checks("scattering");
  const InitialData data = has_initial_data(config) ? make_initial_data(*config.initial_data) : gaussian_fixture();
  if (!has_initial_data(config)) checks.note("Gaussian pair fixture");
  ReportGrid grid;
  grid.threads = threads;
  const AssumptionReport report = verify_assumptions(data, grid);
  checks.add("zero_mass", report.mass_residual, 1, config.tolerances.mass);
  checks.add("endpoint_decay", data.endpoint_magnitude(), 2, config.tolerances.decay);
  checks.add("circle_relation", report.circle_relation, grid.circle_points, config.tolerances.circle_relation);

  const std::vector<double> theta = arc_grid(64, config.theta_end);
  const SpectralData spec = computed_spectral(data, theta, threads);
  checks.add("conjugation", spec.conjugation_defect(), theta.size(), config.tolerances.conjugation);
  checks.add("one_plus_r1r2_at_least_one", std::max(0.0, 1.0 - spec.min_one_plus_product()), theta.size(), 0.0);

  // The limits r1 -> 1, r2 -> -1 hold only when s11 has simple poles at k = +-1.
  if (report.residues_ok) {
    double worst = 0.0;
    for (double sign : {1.0, -1.0}) {
      worst = std::max(worst, std::abs(reflection_limit(1, data, sign) - 1.0));
      worst = std::max(worst, std::abs(reflection_limit(2, data, sign) + 1.0));
    }
    checks.add("endpoint_limits", worst, 4, config.tolerances.endpoint);
  } else {
    checks.note("endpoint limits skipped: s11 has no poles at k = +-1 for these data");
  }
  return checks.take();
}

double standard_deviation(const std::vector<double>& values) {
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  double variance = 0.0;
  for (double v : values) variance += (v - mean) * (v - mean) / static_cast<double>(values.size());
  return std::sqrt(variance);
}

SuiteReport parametrix_suite(const RunConfig& config, int threads) {
  Checks checks("parametrix");
  const bool configured = config.spectral_input || config.initial_data;
  const SpectralData spec =
      configured ? make_spectral(config, threads) : synthetic_spectral(BumpProfile{}, arc_grid(1025));
  if (!configured) checks.note("synthetic bump fixture on 1025 arc points");

  const GlobalParametrix global(spec, saddle_points(config.verify_tau, config.tau_max));
  const double theta1 = global.context().arg_k1;

  double jump = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double theta = pi / 2 + (i + 0.5) * (theta1 - pi / 2) / 8;
    const cplx ratio = global.delta_boundary(theta, ArcSide::outer) / global.delta_boundary(theta, ArcSide::inner);
    jump = std::max(jump, std::abs(ratio - (1.0 + spec.r1_at(theta) * spec.r2_at(theta))));
  }
  checks.add("delta_jump_ratio", jump, 8, config.tolerances.delta_jump);

  std::vector<double> moduli;
  for (int i = 0; i < 16; ++i)
    moduli.push_back(std::abs(global.delta(std::polar(1.0, theta1 + (i + 0.5) * (2 * pi - (theta1 - pi / 2)) / 16))));
  checks.add("delta_modulus_off_arc", standard_deviation(moduli), moduli.size(), config.tolerances.delta_modulus);

  const cplx direction = std::polar(1.0, 0.7);
  const auto scaled = [&](double radius) { return radius * direction * (global.Delta33(radius * direction) - 1.0); };
  const cplx limit = (10.0 * scaled(1e4) - scaled(1e3)) / 9.0;
  checks.add("delta33_large_k", std::abs(limit - global.delta33_moment()), 2, config.tolerances.delta33_moment);

  double modulus = 0.0;
  for (double x : {10.0, 100.0, 1000.0}) {
    const ParametrixBundle bundle = local_scalars(global, spec, x);
    modulus = std::max(modulus, std::abs(std::abs(bundle.d0) - std::exp(2 * pi * bundle.nu)));
  }
  checks.add("d0_modulus", modulus, 3, config.tolerances.d0_modulus);

  const double tau_top = std::min(0.3, config.tau_max);
  const double tau_low = std::min(0.03, tau_top / 10);
  const std::vector<double> xs{10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000};
  std::vector<double> worst(10, 0.0);
  parallel_for(10, threads, [&](std::size_t i) {
    const double tau = std::min(tau_top, tau_low + (tau_top - tau_low) * static_cast<double>(i) / 9.0);
    const GlobalParametrix local(spec, saddle_points(tau, config.tau_max));
    for (double x : xs)
      worst[i] = std::max(worst[i], std::abs(wrap_angle(arg_d0_routeA(local, x) - arg_d0_routeB(local, spec, x))));
  });
  checks.add("arg_d0_routes", *std::max_element(worst.begin(), worst.end()), 100, config.tolerances.route_mismatch);
  return checks.take();
}

cplx smooth_r1(cplx k) { return 0.06 * std::exp(cplx(0.35, -0.2) * k + cplx(-0.1, 0.4) / k) + cplx(0.02, 0.05) * k * k; }

SuiteReport deform_suite(const RunConfig& config, int threads) {
  Checks checks("deform");
  const ReflectionSampler exact = circle_consistent_family(smooth_r1);
  const std::vector<cplx> ks = circle_samples(100, 21);
  for (const FactorizationResidual& row : check_factorizations(exact, 4.0, 0.8, ks))
    checks.add("factorization " + row.name, row.max_residual, row.samples, config.tolerances.factorization);
  checks.add("unit_determinant", max_determinant_defect(exact, 4.0, 0.8, ks), ks.size(), config.tolerances.determinant);

  const std::vector<cplx> symmetric = circle_samples(50, 31);
  const SymmetryReport exact_symmetry = check_symmetries(exact, 7.3, 0.9, symmetric, threads);
  checks.add("symmetry_A exact", exact_symmetry.residual_A, exact_symmetry.samples, config.tolerances.symmetry);
  checks.add("symmetry_B exact", exact_symmetry.residual_B, exact_symmetry.samples, config.tolerances.symmetry);
  if (has_initial_data(config)) {
    const ReflectionSampler computed = computed_sampler(make_initial_data(*config.initial_data));
    const SymmetryReport report = check_symmetries(computed, 10.0, 1.0, symmetric, threads);
    checks.add("symmetry_A computed", report.residual_A, report.samples, config.tolerances.symmetry);
    checks.add("symmetry_B computed", report.residual_B, report.samples, config.tolerances.symmetry);
  } else {
    checks.note("computed-data symmetries skipped: no initial_data in config");
  }
  return checks.take();
}

double ray_angle(CrossRay ray) {
  switch (ray) {
    case CrossRay::x1: return pi / 4;
    case CrossRay::x2: return 3 * pi / 4;
    case CrossRay::x3: return -3 * pi / 4;
    case CrossRay::x4: return -pi / 4;
  }
  return 0.0;
}

SuiteReport model_rh_suite(const RunConfig& config) {
  Checks checks("model-rh");
  for (cplx q : config.model_q) {
    std::ostringstream label;
    label << "q=" << format_number(q.real()) << (q.imag() < 0 ? "" : "+") << format_number(q.imag()) << "i";
    const ModelSolution sol = model_solution(q);

    double jump = 0.0;
    std::size_t points = 0;
    for (CrossRay ray : {CrossRay::x1, CrossRay::x2, CrossRay::x3, CrossRay::x4})
      for (double radius : {0.05, 0.7, 2.0, 5.0, 9.5, 30.0}) {
        const cplx z = std::polar(radius, ray_angle(ray));
        const Mat3 plus = model_mX_in(sol, z, plus_side(ray));
        const Mat3 minus = model_mX_in(sol, z, minus_side(ray));
        jump = std::max(jump, max_abs(plus - minus * model_vX(q, z, ray)));
        ++points;
      }
    checks.add("jump " + label.str(), jump, points, config.tolerances.model_jump);

    // z (m - I) = m1X + m2 / z + m3 / z^2 + ...; radii 50, 100, 200 remove m2 and m3.
    double coefficient = 0.0, raw = 0.0;
    for (double angle : {0.3, 1.2, 2.7, -2.0, -0.3}) {
      const auto scaled = [&](double radius) {
        const cplx z = std::polar(radius, angle);
        return Mat3(z * (model_mX(q, z) - Mat3::Identity()));
      };
      const Mat3 first = 2.0 * scaled(100.0) - scaled(50.0);
      const Mat3 second = 2.0 * scaled(200.0) - scaled(100.0);
      coefficient = std::max(coefficient, max_abs(Mat3((4.0 * second - first) / 3.0) - sol.m1X));
      raw = std::max(raw, max_abs(scaled(50.0) - sol.m1X));
    }
    checks.add("large_z_coefficient " + label.str(), coefficient, 5, config.tolerances.model_coefficient);
    checks.note("raw |z (m - I) - m1X| at |z| = 50 for " + label.str() + ": " + format_number(raw) +
                " (the m2 / z term)");
    checks.add("beta_product " + label.str(), std::abs(sol.beta12 * sol.beta21 - sol.nu), 1,
               config.tolerances.beta_product);

    if (sol.nu < 0.0) {
      const double nu = sol.nu;
      const double lhs = std::exp(log_gamma(cplx(0.0, nu)).real());
      const double rhs = std::sqrt(2 * pi) / (std::sqrt(-nu) * std::sqrt(std::exp(-pi * nu) - std::exp(pi * nu)));
      checks.add("gamma_modulus " + label.str(), std::abs(lhs / rhs - 1.0), 1, config.tolerances.gamma_identity);
    }
  }
  return checks.take();
}

SuiteReport pde_suite(const RunConfig& config) {
  Checks checks("pde");
  const InitialData data = has_initial_data(config) ? make_initial_data(*config.initial_data) : gaussian_fixture();
  const PdeState start = evolve(data, 0.0, config.oracle.options, config.oracle.grid);
  double reproduction = 0.0;
  for (std::size_t j = 0; j < start.u.size(); ++j) {
    const DataSample sample = data.sample(start.grid.at(j));
    reproduction = std::max({reproduction, std::abs(start.u[j] - sample.u0), std::abs(start.ut[j] - sample.u1)});
  }
  checks.add("t0_reproduction", reproduction, start.u.size(), 0.0);

  // Linear mode eps cos(xi0 x) on 48 periods; frequency xi0 sqrt(1 - xi0^2).
  constexpr double xi0 = 0.5, epsilon = 1e-6;
  const PeriodicGrid mode_grid{0.0, 48.0 * 2.0 * pi / xi0, 2048};
  PdeState mode{mode_grid, std::vector<double>(mode_grid.points), std::vector<double>(mode_grid.points, 0.0), 0.8, 0.0};
  for (std::size_t j = 0; j < mode_grid.points; ++j) mode.u[j] = epsilon * std::cos(xi0 * mode_grid.at(j));
  const double omega_exact = xi0 * std::sqrt(1.0 - xi0 * xi0);
  double dispersion = 0.0;
  for (double t : {0.25, 0.5, 0.75, 1.0}) {
    mode = evolve(mode, t);
    double sum = 0.0;
    for (std::size_t j = 0; j < mode.u.size(); ++j) sum += mode.u[j] * std::cos(xi0 * mode_grid.at(j));
    const double amplitude = 2.0 * sum / static_cast<double>(mode.u.size());
    dispersion = std::max(dispersion, std::abs(std::acos(amplitude / epsilon) / t - omega_exact) / omega_exact);
  }
  checks.add("linear_dispersion", dispersion, 4, config.tolerances.dispersion);

  const PeriodicGrid grid{-320.0, 640.0, 2048};
  PdeState pulse{grid, std::vector<double>(grid.points), std::vector<double>(grid.points), 0.8, 0.0};
  for (std::size_t j = 0; j < grid.points; ++j) {
    const double x = grid.at(j);
    pulse.u[j] = 0.05 * std::exp(-x * x / 200.0);
    pulse.ut[j] = -0.02 * x / 100.0 * std::exp(-x * x / 200.0);
  }
  const PdeState back = evolve(evolve(pulse, 2.0), 0.0);
  double reversal = 0.0;
  for (std::size_t j = 0; j < grid.points; ++j)
    reversal = std::max({reversal, std::abs(back.u[j] - pulse.u[j]), std::abs(back.ut[j] - pulse.ut[j])});
  checks.add("time_reversal", reversal, grid.points, config.tolerances.reversal);
  return checks.take();
}

json to_json(const CheckResult& check) {
  return {{"suite", check.suite},
          {"name", check.name},
          {"max_residual", check.max_residual},
          {"samples", check.samples},
          {"tolerance", check.tolerance},
          {"passed", check.passed}};
}

}  // namespace

// ---------------------------------------------------------------------------

RunConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& error) {
    throw ConfigError(std::string("malformed JSON: ") + error.what());
  }
  const Reader reader(text);
  const Node top{&root, {}};
  reader.expect_object(top, {"threads", "initial_data", "spectral_input", "arc_points", "theta_end", "tau_max",
                             "tau_grid", "x_grid", "tolerances", "scatter", "asymptote", "verify", "oracle"});
  RunConfig config;
  if (auto v = reader.find(top, "threads")) {
    const long long threads = reader.integer(*v);
    if (threads < 1) reader.fail(*v, "must be at least 1");
    config.threads = static_cast<int>(threads);
  }
  if (auto v = reader.find(top, "initial_data")) config.initial_data = read_data(reader, *v);
  if (auto v = reader.find(top, "spectral_input")) config.spectral_input = reader.string(*v);
  if (auto v = reader.find(top, "arc_points")) {
    const long long points = reader.integer(*v);
    if (points < 32) reader.fail(*v, "must be at least 32");
    config.arc_points = static_cast<std::size_t>(points);
  }
  if (auto v = reader.find(top, "theta_end")) {
    config.theta_end = reader.number(*v);
    if (!(config.theta_end > pi / 2 && config.theta_end < 2 * pi / 3)) reader.fail(*v, "must lie in (pi/2, 2pi/3)");
  }
  if (auto v = reader.find(top, "tau_max")) {
    config.tau_max = reader.number(*v);
    if (!(config.tau_max > 0.0 && config.tau_max < 1.0)) reader.fail(*v, "must lie in (0, 1)");
  }
  if (auto v = reader.find(top, "tau_grid")) {
    config.tau_grid = reader.grid(*v);
    for (double tau : config.tau_grid)
      if (tau < 0.0 || tau > config.tau_max) reader.fail(*v, "values must lie in [0, tau_max]");
  }
  if (auto v = reader.find(top, "x_grid")) {
    config.x_grid = reader.grid(*v);
    for (double x : config.x_grid)
      if (x < 2.0) reader.fail(*v, "values must be at least 2");
  }
  if (auto v = reader.find(top, "tolerances")) config.tolerances = read_tolerances(reader, *v);

  if (auto section = reader.find(top, "scatter")) {
    reader.expect_object(*section, {"out"});
    config.outputs.scatter = read_out(reader, *section);
  }
  if (auto section = reader.find(top, "asymptote")) {
    reader.expect_object(*section, {"out", "order_N", "x_min"});
    config.outputs.asymptote = read_out(reader, *section);
    if (auto v = reader.find(*section, "order_N")) {
      config.order_N = static_cast<int>(reader.integer(*v));
      if (config.order_N < 1) reader.fail(*v, "must be at least 1");
    }
    if (auto v = reader.find(*section, "x_min")) {
      config.asymptotic_x_min = reader.number(*v);
      if (config.asymptotic_x_min < 2.0) reader.fail(*v, "must be at least 2");
    }
  }
  if (auto section = reader.find(top, "verify")) {
    reader.expect_object(*section, {"out", "tau", "model_q"});
    config.outputs.verify = read_out(reader, *section);
    if (auto v = reader.find(*section, "tau")) {
      config.verify_tau = reader.number(*v);
      if (!(config.verify_tau > 0.0 && config.verify_tau <= config.tau_max)) reader.fail(*v, "must lie in (0, tau_max]");
    }
    if (auto v = reader.find(*section, "model_q")) {
      if (!v->value->is_array()) reader.fail(*v, "expected a list");
      config.model_q.clear();
      for (std::size_t i = 0; i < v->value->size(); ++i) config.model_q.push_back(reader.complex(reader.element(*v, i)));
    }
  }
  if (auto section = reader.find(top, "oracle")) {
    reader.expect_object(*section, {"out", "times", "dt", "xi_max", "blowup_threshold", "grid"});
    config.outputs.oracle = read_out(reader, *section);
    OracleSection& oracle = config.oracle;
    if (auto v = reader.find(*section, "times")) {
      oracle.times = reader.grid(*v);
      if (oracle.times.empty() || !std::is_sorted(oracle.times.begin(), oracle.times.end()) || oracle.times.front() < 0.0)
        reader.fail(*v, "expected a non-empty, non-decreasing list of non-negative times");
    }
    if (auto v = reader.find(*section, "dt")) {
      oracle.options.dt = reader.number(*v);
      if (!(oracle.options.dt > 0.0)) reader.fail(*v, "must be positive");
    }
    if (auto v = reader.find(*section, "xi_max")) {
      oracle.options.xi_max = reader.number(*v);
      if (!(oracle.options.xi_max > 0.0 && oracle.options.xi_max <= 0.9)) reader.fail(*v, "must lie in (0, 0.9]");
    }
    if (auto v = reader.find(*section, "blowup_threshold")) {
      oracle.options.blowup_threshold = reader.number(*v);
      if (!(oracle.options.blowup_threshold > 0.0)) reader.fail(*v, "must be positive");
    }
    if (auto v = reader.find(*section, "grid")) {
      reader.expect_object(*v, {"x_min", "length", "points"});
      if (auto w = reader.find(*v, "x_min")) oracle.grid.x_min = reader.number(*w);
      if (auto w = reader.find(*v, "length")) {
        oracle.grid.length = reader.number(*w);
        if (!(oracle.grid.length > 0.0)) reader.fail(*w, "must be positive");
      }
      if (auto w = reader.find(*v, "points")) {
        const long long points = reader.integer(*w);
        if (points < 4) reader.fail(*w, "needs at least 4 points");
        oracle.grid.points = static_cast<std::size_t>(points);
      }
    }
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot open config " + path.string());
  std::ostringstream text;
  text << file.rdbuf();
  return parse_config(text.str());
}

InitialData make_initial_data(const DataSpec& spec) {
  switch (spec.family) {
    case DataFamily::zero: return InitialData::zero(spec.grid);
    case DataFamily::gaussian: return InitialData::shaped(ProfileShape::gaussian, spec.u0, spec.envelope, spec.grid);
    case DataFamily::sech2: return InitialData::shaped(ProfileShape::sech2, spec.u0, spec.envelope, spec.grid);
    case DataFamily::table: return read_table(spec.table);
    case DataFamily::bump: break;
  }
  throw ConfigError("the bump family is spectral data only; it has no initial data");
}

SpectralData make_spectral(const RunConfig& config, int threads) {
  if (config.spectral_input) {
    std::ifstream file(*config.spectral_input);
    if (!file) throw ConfigError("cannot open spectral input " + config.spectral_input->string());
    return read_csv(file);
  }
  if (!config.initial_data) throw ConfigError("config needs initial_data or spectral_input");
  const std::vector<double> theta = arc_grid(config.arc_points, config.theta_end);
  if (config.initial_data->family == DataFamily::bump) return synthetic_spectral(config.initial_data->bump, theta);
  return computed_spectral(make_initial_data(*config.initial_data), theta, threads);
}

std::vector<Suite> parse_suites(std::string_view name) {
  if (name == "all") return {Suite::scattering, Suite::parametrix, Suite::deform, Suite::model_rh, Suite::pde};
  for (Suite suite : {Suite::scattering, Suite::parametrix, Suite::deform, Suite::model_rh, Suite::pde})
    if (name == to_string(suite)) return {suite};
  throw ConfigError("unknown suite '" + std::string(name) + "': expected all, scattering, parametrix, deform, model-rh or pde");
}

std::string_view to_string(Suite suite) {
  switch (suite) {
    case Suite::scattering: return "scattering";
    case Suite::parametrix: return "parametrix";
    case Suite::deform: return "deform";
    case Suite::model_rh: return "model-rh";
    case Suite::pde: return "pde";
  }
  return "";
}

SuiteReport run_suite(Suite suite, const RunConfig& config, int threads) {
  switch (suite) {
    case Suite::scattering: return scattering_suite(config, threads);
    case Suite::parametrix: return parametrix_suite(config, threads);
    case Suite::deform: return deform_suite(config, threads);
    case Suite::model_rh: return model_rh_suite(config);
    case Suite::pde: return pde_suite(config);
  }
  return {};
}

std::string scatter_csv(const RunConfig& config, int threads) {
  if (!config.initial_data) throw ConfigError("scatter needs an initial_data section");
  RunConfig data_only = config;
  data_only.spectral_input.reset();
  std::ostringstream out;
  write_csv(make_spectral(data_only, threads), out);
  return out.str();
}

std::string asymptote_csv(const RunConfig& config, int threads, std::ostream& diagnostics) {
  if (config.tau_grid.empty() || config.x_grid.empty()) throw ConfigError("asymptote needs tau_grid and x_grid");
  const SpectralData spec = make_spectral(config, threads);
  AsymptoticOptions options;
  options.tau_max = config.tau_max;
  options.x_min = config.asymptotic_x_min;
  options.order_N = config.order_N;

  struct Block {
    std::string rows;
    std::string skipped;
  };
  std::vector<Block> blocks(config.tau_grid.size());
  parallel_for(blocks.size(), threads, [&](std::size_t i) {
    const double tau = config.tau_grid[i];
    std::ostringstream rows, skipped;
    const auto skip = [&](double x, const std::exception& error) {
      skipped << "skipped row x=" << format_number(x) << " tau=" << format_number(tau) << ": " << error.what() << '\n';
    };
    std::optional<LeadingOrder> leading;
    std::optional<GlobalParametrix> global;
    try {
      leading.emplace(spec, tau, options);
      global.emplace(spec, saddle_points(tau, config.tau_max));
    } catch (const std::exception& error) {
      for (double x : config.x_grid) skip(x, error);
      blocks[i] = {"", skipped.str()};
      return;
    }
    for (double x : config.x_grid) {
      try {
        const AsymptoticResult row = leading->evaluate(x);
        const double mismatch = std::abs(wrap_angle(arg_d0_routeA(*global, x) - arg_d0_routeB(*global, spec, x)));
        const std::string warning =
            mismatch > config.tolerances.route_mismatch ? "arg d0 route mismatch above tolerance" : "";
        rows << format_number(row.x) << ',' << format_number(row.tau) << ',' << format_number(row.t) << ','
             << format_number(row.nu) << ',' << format_number(row.A) << ',' << format_number(row.alpha_wrapped) << ','
             << format_number(row.alpha_unwrapped) << ',' << format_number(row.u_leading) << ','
             << format_number(row.error_scale.xN_term) << ',' << format_number(row.error_scale.log_term) << ','
             << format_number(mismatch) << ',' << warning << '\n';
      } catch (const std::exception& error) {
        skip(x, error);
      }
    }
    blocks[i] = {rows.str(), skipped.str()};
  });

  std::string csv = "x,tau,t,nu,A,alpha_wrapped,alpha_unwrapped,u_leading,xN_term,log_term,arg_d0_mismatch,warning\n";
  for (const Block& block : blocks) {
    csv += block.rows;
    diagnostics << block.skipped;
  }
  return csv;
}

std::string verify_json(std::span<const Suite> suites, const RunConfig& config, int threads, bool& passed) {
  json checks = json::array(), notes = json::array(), names = json::array();
  passed = true;
  for (Suite suite : suites) {
    names.push_back(std::string(to_string(suite)));
    const SuiteReport report = run_suite(suite, config, threads);
    for (const CheckResult& check : report.checks) {
      passed = passed && check.passed;
      checks.push_back(to_json(check));
    }
    for (const std::string& note : report.notes) notes.push_back(note);
  }
  const json document{{"suites", names}, {"passed", passed}, {"checks", checks}, {"notes", notes}};
  return document.dump(2) + "\n";
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Inverse-scattering and Sector I asymptotics for the Boussinesq equation", "boussinesq"};
  app.require_subcommand(1);
  std::string config_path, out_path, suite_name = "all";
  int threads = 0;
  const auto common = [&](CLI::App* command, bool config_required) {
    CLI::Option* option = command->add_option("--config", config_path, "JSON run configuration");
    if (config_required) option->required();
    command->add_option("--out", out_path, "output path; overrides the config, stdout when absent");
    command->add_option("--threads", threads, "worker threads; overrides the config")->check(CLI::PositiveNumber);
  };
  CLI::App* scatter = app.add_subcommand("scatter", "reflection coefficients on the arc grid as CSV");
  CLI::App* asymptote = app.add_subcommand("asymptote", "leading-order table over tau_grid x x_grid as CSV");
  CLI::App* verify = app.add_subcommand("verify", "identity checks with a JSON report");
  CLI::App* oracle = app.add_subcommand("oracle", "filtered PDE snapshots as CSV");
  common(scatter, true);
  common(asymptote, true);
  common(verify, false);
  common(oracle, true);
  verify->add_option("--suite", suite_name, "all, scattering, parametrix, deform, model-rh or pde");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error, out, err);
    return code == 0 ? static_cast<int>(ExitCode::success) : static_cast<int>(ExitCode::usage_error);
  }

  RunConfig config;
  std::vector<Suite> suites;
  try {
    if (!config_path.empty()) config = load_config(config_path);
    if (verify->parsed()) suites = parse_suites(suite_name);
  } catch (const ConfigError& error) {
    err << "error: " << error.what() << '\n';
    return static_cast<int>(ExitCode::usage_error);
  }
  const int workers = threads > 0 ? threads : config.threads;
  const auto target = [&](const std::filesystem::path& configured) {
    return out_path.empty() ? configured : std::filesystem::path(out_path);
  };

  try {
    if (scatter->parsed()) {
      emit(target(config.outputs.scatter), scatter_csv(config, workers), out);
    } else if (asymptote->parsed()) {
      emit(target(config.outputs.asymptote), asymptote_csv(config, workers, err), out);
    } else if (verify->parsed()) {
      bool passed = false;
      emit(target(config.outputs.verify), verify_json(suites, config, workers, passed), out);
      if (!passed) return static_cast<int>(ExitCode::verification_failure);
    } else if (oracle->parsed()) {
      if (!config.initial_data) throw ConfigError("oracle needs an initial_data section");
      const InitialData data = make_initial_data(*config.initial_data);
      PdeState state = initial_state(data, config.oracle.grid, config.oracle.options.xi_max);
      std::vector<std::string> snapshots;
      for (double t : config.oracle.times) {
        state = evolve(state, t, config.oracle.options);
        std::ostringstream csv;
        write_snapshot_csv(state, csv);
        snapshots.push_back(csv.str());
      }
      const std::filesystem::path path = target(config.outputs.oracle);
      for (std::size_t i = 0; i < snapshots.size(); ++i) {
        // Several times: one file per time, indexed before the extension.
        std::filesystem::path file = path;
        if (!path.empty() && snapshots.size() > 1)
          file = path.parent_path() / (path.stem().string() + "." + std::to_string(i) + path.extension().string());
        if (path.empty()) out << "# t=" << format_number(config.oracle.times[i]) << '\n';
        emit(file, snapshots[i], out);
      }
    }
  } catch (const ConfigError& error) {
    err << "error: " << error.what() << '\n';
    return static_cast<int>(ExitCode::usage_error);
  } catch (const std::exception& error) {
    err << "error: " << error.what() << '\n';
    return static_cast<int>(ExitCode::verification_failure);
  }
  return static_cast<int>(ExitCode::success);
}

}  // namespace bsq::cli
