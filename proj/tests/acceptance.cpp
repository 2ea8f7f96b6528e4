// One PASS/FAIL line per acceptance criterion, with the measured quantities.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "boussinesq/asymptotics.hpp"
#include "boussinesq/decompose.hpp"
#include "boussinesq/jumps.hpp"
#include "boussinesq/model_rh.hpp"
#include "boussinesq/parallel.hpp"
#include "boussinesq/pde.hpp"
#include "boussinesq/special.hpp"

using namespace bsq;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

// Collects "name = value" pairs and the conjunction of their bounds.
class Measurements {
 public:
  void below(const std::string& name, double value, double bound) { record(name, value, value < bound, "<", bound); }
  void above(const std::string& name, double value, double bound) { record(name, value, value > bound, ">", bound); }
  void equal(const std::string& name, double value, double expected) {
    record(name, value, value == expected, "==", expected);
  }
  Outcome outcome() const { return {passed_, detail_.str()}; }

 private:
  void record(const std::string& name, double value, bool ok, const char* relation, double bound) {
    passed_ = passed_ && ok;
    detail_ << (first_ ? "" : "; ") << name << " = " << std::setprecision(3) << value << " (" << relation << ' '
            << bound << (ok ? "" : ", violated") << ')';
    first_ = false;
  }
  bool passed_ = true, first_ = true;
  std::ostringstream detail_;
};

const SpectralData& bump_spec() {
  static const SpectralData spec = synthetic_spectral(BumpProfile{}, arc_grid(1025));
  return spec;
}

InitialData gaussian_pair() {
  return InitialData::shaped(ProfileShape::gaussian, {0.3, 1.0, 0.0}, {0.2, 1.0, 0.0});
}

double fitted_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += std::log(xs[i]) / n, my += std::log(ys[i]) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (std::log(xs[i]) - mx) * (std::log(ys[i]) - my);
    sxx += (std::log(xs[i]) - mx) * (std::log(xs[i]) - mx);
  }
  return sxy / sxx;
}

// Composite Simpson over theta in [pi/2, theta_end] with ds = i e^{i theta} dtheta.
template <class F>
cplx arc_integral(F f, double theta_end, int panels = 4000) {
  const double h = (theta_end - pi / 2) / panels;
  cplx sum = 0.0;
  for (int i = 0; i <= panels; ++i) {
    const double t = pi / 2 + i * h;
    const double weight = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += weight * f(t) * I1 * std::polar(1.0, t);
  }
  return sum * h / 3.0;
}

Outcome saddle_closed_form() {
  double derivative = 0.0, modulus = 0.0;
  for (int n = 1; n <= 50; ++n) {
    const double tau = 0.01 + (0.3 - 0.01) * n / 50.0;
    const PhaseContext ctx = saddle_points(tau);
    for (cplx k : {ctx.k1, ctx.k2, ctx.k3, ctx.k4}) derivative = std::max(derivative, std::abs(phase21_dk(tau, k)));
    modulus = std::max(modulus, std::abs(std::abs(ctx.k1) - 1.0));
  }
  Measurements m;
  m.below("max |dPhi21/dk(kj)|", derivative, 1e-10);
  m.below("max ||k1| - 1|", modulus, 1e-12);
  return m.outcome();
}

Outcome scattering_identities() {
  const InitialData data = gaussian_pair();
  const std::vector<double> theta = arc_grid(64, 2.0 * pi / 3.0 - 0.05);
  std::vector<double> circle(theta.size());
  parallel_for(theta.size(), 8, [&](std::size_t i) { circle[i] = std::abs(circle_relation(data, std::polar(1.0, theta[i]))); });
  const SpectralData spec = computed_spectral(data, theta, 8);
  double endpoint = 0.0;
  for (double sign : {1.0, -1.0}) {
    endpoint = std::max(endpoint, std::abs(reflection_limit(1, data, sign) - 1.0));
    endpoint = std::max(endpoint, std::abs(reflection_limit(2, data, sign) + 1.0));
  }
  Measurements m;
  m.below("circle relation over 64 arc points", *std::max_element(circle.begin(), circle.end()), 1e-6);
  m.below("conjugation relation", spec.conjugation_defect(), 1e-6);
  m.below("endpoint limits r1 -> 1, r2 -> -1", endpoint, 1e-3);
  return m.outcome();
}

Outcome delta_suite() {
  const GlobalParametrix global(bump_spec(), saddle_points(0.15));
  const double theta1 = global.context().arg_k1;
  double jump = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double theta = pi / 2 + (i + 0.5) * (theta1 - pi / 2) / 8;
    const cplx ratio = global.delta_boundary(theta, ArcSide::outer) / global.delta_boundary(theta, ArcSide::inner);
    jump = std::max(jump, std::abs(ratio - (1.0 + bump_spec().r1_at(theta) * bump_spec().r2_at(theta))));
  }
  std::vector<double> moduli;
  for (int i = 0; i < 16; ++i)
    moduli.push_back(std::abs(global.delta(std::polar(1.0, theta1 + (i + 0.5) * (2 * pi - (theta1 - pi / 2)) / 16))));
  const double mean = std::accumulate(moduli.begin(), moduli.end(), 0.0) / static_cast<double>(moduli.size());
  double variance = 0.0;
  for (double v : moduli) variance += (v - mean) * (v - mean) / static_cast<double>(moduli.size());

  const cplx oracle = -std::sqrt(3.0) / (2 * pi) * arc_integral([&](double t) {
                        const cplx s = std::polar(1.0, t);
                        return global.g(t) * (1.0 + 1.0 / (s * s));
                      }, theta1);
  const cplx direction = std::polar(1.0, 0.7);
  const auto scaled = [&](double radius) { return radius * direction * (global.Delta33(radius * direction) - 1.0); };
  const cplx limit = (10.0 * scaled(1e4) - scaled(1e3)) / 9.0;

  Measurements m;
  m.below("jump ratio at 8 midpoints", jump, 1e-6);
  m.below("std |delta| on complementary arc", std::sqrt(variance), 1e-8);
  m.below("k (Delta33 - 1) limit vs arc integral", std::abs(limit - oracle), 1e-6);
  return m.outcome();
}

Outcome d0_suite() {
  const GlobalParametrix global(bump_spec(), saddle_points(0.15));
  double modulus = 0.0;
  for (double x : {10.0, 100.0, 1000.0}) {
    const ParametrixBundle bundle = local_scalars(global, bump_spec(), x);
    modulus = std::max(modulus, std::abs(std::abs(bundle.d0) - std::exp(2 * pi * bundle.nu)));
  }
  const std::vector<double> xs{10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000};
  std::vector<double> worst(10, 0.0);
  parallel_for(10, 8, [&](std::size_t i) {
    const GlobalParametrix local(bump_spec(), saddle_points(0.03 + 0.03 * static_cast<double>(i)));
    for (double x : xs)
      worst[i] = std::max(worst[i], std::abs(wrap_angle(arg_d0_routeA(local, x) - arg_d0_routeB(local, bump_spec(), x))));
  });
  Measurements m;
  m.below("max ||d0| - e^{2 pi nu}|", modulus, 1e-8);
  m.below("arg d0 route A - route B mod 2 pi, 10 x 10 grid", *std::max_element(worst.begin(), worst.end()), 1e-6);
  return m.outcome();
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

Outcome model_rh_suite() {
  double jump = 0.0, coefficient = 0.0, beta = 0.0, gamma = 0.0;
  for (cplx q : {cplx(0.1, 0.0), cplx(0.5, 0.2), cplx(2.0, 0.0)}) {
    const ModelSolution sol = model_solution(q);
    for (CrossRay ray : {CrossRay::x1, CrossRay::x2, CrossRay::x3, CrossRay::x4})
      for (double radius : {0.05, 0.7, 2.0, 5.0, 9.5, 30.0}) {
        const cplx z = std::polar(radius, ray_angle(ray));
        const Mat3 plus = model_mX_in(sol, z, plus_side(ray));
        const Mat3 minus = model_mX_in(sol, z, minus_side(ray));
        jump = std::max(jump, max_abs(plus - minus * model_vX(q, z, ray)));
      }
    for (double angle : {0.3, 1.2, 2.7, -2.0, -0.3}) {
      const cplx z = std::polar(50.0, angle);
      coefficient = std::max(coefficient, max_abs(Mat3(z * (model_mX(q, z) - Mat3::Identity())) - sol.m1X));
    }
    beta = std::max(beta, std::abs(sol.beta12 * sol.beta21 - sol.nu));
    const double nu = sol.nu;
    const double exact = std::sqrt(2 * pi) / (std::sqrt(-nu) * std::sqrt(std::exp(-pi * nu) - std::exp(pi * nu)));
    gamma = std::max(gamma, std::abs(std::exp(log_gamma(cplx(0.0, nu)).real()) / exact - 1.0));
  }
  Measurements m;
  m.below("jump residual at 24 cross points", jump, 1e-8);
  m.below("|z (m - I) - m1| at |z| = 50", coefficient, 1e-4);
  m.below("|beta12 beta21 - nu|", beta, 1e-12);
  m.below("relative |Gamma(i nu)| identity", gamma, 1e-12);
  return m.outcome();
}

cplx smooth_r1(cplx k) { return 0.06 * std::exp(cplx(0.35, -0.2) * k + cplx(-0.1, 0.4) / k) + cplx(0.02, 0.05) * k * k; }

Outcome factorization_suite() {
  const ReflectionSampler exact = circle_consistent_family(smooth_r1);
  double factorization = 0.0;
  for (const FactorizationResidual& row : check_factorizations(exact, 4.0, 0.8, circle_samples(100, 21)))
    factorization = std::max(factorization, row.max_residual);
  const SymmetryReport symmetry = check_symmetries(computed_sampler(gaussian_pair()), 10.0, 1.0, circle_samples(50, 41), 8);
  Measurements m;
  m.below("exact-r factorizations at 100 points", factorization, 1e-10);
  m.below("A/B symmetry residual, computed data", std::max(symmetry.residual_A, symmetry.residual_B), 1e-6);
  return m.outcome();
}

Outcome decomposition_decay() {
  const RayDecomposition split([](cplx k) { return 0.4 * std::exp(-I1 * k - 1.0); });
  std::vector<double> xs, linf;
  for (double x = 4.0; x <= 256.0; x *= 2.0) {
    xs.push_back(x);
    linf.push_back(split.remainder_norms(x).linf);
  }
  Measurements m;
  m.below("|fitted L-infinity slope + 2.5|, N = 2, x = 4..256", std::abs(fitted_slope(xs, linf) + 2.5), 0.3);
  return m.outcome();
}

Outcome asymptotic_structure() {
  const std::vector<double> taus{0.08, 0.06, 0.045, 0.03, 0.02};
  std::vector<double> amps;
  for (double tau : taus) amps.push_back(amplitude(bump_spec(), saddle_points(tau)));
  const double last_slope = std::log(amps[3] / amps[4]) / std::log(taus[3] / taus[4]);

  const auto phase_on_trajectory = [](double tau) { return phase21(tau, saddle_points(tau).k1); };
  double trajectory = 0.0;
  for (double tau : {0.03, 0.1, 0.17, 0.25, 0.29}) {
    const double h = 1e-3;
    const cplx derivative = (phase_on_trajectory(tau - 2 * h) - 8.0 * phase_on_trajectory(tau - h) +
                             8.0 * phase_on_trajectory(tau + h) - phase_on_trajectory(tau + 2 * h)) /
                            (12.0 * h);
    trajectory = std::max(trajectory, std::abs((phase_on_trajectory(tau) - tau * derivative).imag() -
                                               saddle_points(tau).k1.imag()));
  }

  const LeadingOrder leading(bump_spec(), 0.2);
  const double expected = pi / leading.phase_rate();
  const auto u = [&](double x) { return leading.evaluate(x).u_leading; };
  std::vector<double> crossings;
  const double step = expected / 20;
  for (double x = 1e3; x + step <= 1e4; x += step) {
    if ((u(x) > 0) == (u(x + step) > 0)) continue;
    double lo = x, hi = x + step;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      ((u(lo) > 0) == (u(mid) > 0) ? lo : hi) = mid;
    }
    crossings.push_back(0.5 * (lo + hi));
  }
  double spacing = 0.0;
  for (std::size_t i = 0; i + 1 < crossings.size(); ++i)
    spacing = std::max(spacing, std::abs(crossings[i + 1] - crossings[i] - expected) / expected);

  Measurements m;
  m.above("log-log slope of A at tau = 0.02", last_slope, 3.0);
  m.below("saddle-trajectory identity", trajectory, 1e-6);
  m.above("zero crossings in [1e3, 1e4]", static_cast<double>(crossings.size()), 100.0);
  m.below("relative zero-crossing spacing error", spacing, 0.01);
  return m.outcome();
}

Outcome pde_sanity() {
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

  const InitialData data = gaussian_pair();
  const PdeState start = evolve(data, 0.0);
  double reproduction = 0.0;
  for (std::size_t j = 0; j < start.u.size(); ++j) {
    const DataSample sample = data.sample(start.grid.at(j));
    reproduction = std::max({reproduction, std::abs(start.u[j] - sample.u0), std::abs(start.ut[j] - sample.u1)});
  }
  Measurements m;
  m.below("relative dispersion frequency error", dispersion, 1e-6);
  m.below("time-reversal round trip", reversal, 1e-8);
  m.equal("t = 0 reproduction", reproduction, 0.0);
  return m.outcome();
}

struct Criterion {
  int number;
  std::string title;
  std::function<Outcome()> body;
  double time_limit = 0.0;  // seconds; 0 when no runtime bound applies
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "saddle closed form", saddle_closed_form, 1.0},
      {2, "scattering identities", scattering_identities, 60.0},
      {3, "delta / Delta suite", delta_suite},
      {4, "d0 suite", d0_suite},
      {5, "model RH suite", model_rh_suite},
      {6, "factorization suite", factorization_suite},
      {7, "decomposition decay", decomposition_decay},
      {8, "asymptotics structure", asymptotic_structure},
      {9, "PDE oracle sanity", pde_sanity, 30.0},
  };
  bool all_passed = true;
  for (const Criterion& criterion : criteria) {
    const auto begin = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.body();
    } catch (const std::exception& error) {
      outcome = {false, std::string("exception: ") + error.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
    std::ostringstream timing;
    timing << std::fixed << std::setprecision(2) << seconds << " s";
    if (criterion.time_limit > 0.0) {
      timing << " (< " << criterion.time_limit << " s)";
      if (seconds >= criterion.time_limit) {
        outcome.passed = false;
        timing << " runtime exceeded";
      }
    }
    all_passed = all_passed && outcome.passed;
    std::cout << "criterion " << criterion.number << " [" << criterion.title << "]: " << (outcome.passed ? "PASS" : "FAIL")
              << " | " << outcome.detail << " | " << timing.str() << std::endl;
  }
  return all_passed ? 0 : 1;
}
