#include "boussinesq/pde.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "boussinesq/fft.hpp"

namespace bsq {

namespace {

std::vector<cplx> spectrum_of(std::span<const double> values) {
  std::vector<cplx> modes(values.begin(), values.end());
  fft_inplace(modes, FftDirection::forward);
  return modes;
}

void real_inverse(std::vector<cplx>& modes, std::span<double> out) {
  fft_inplace(modes, FftDirection::backward);
  const double scale = 1.0 / static_cast<double>(modes.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = modes[j].real() * scale;
}

// Removes every mode above the cutoff, in place.
void project(const PeriodicGrid& grid, double xi_max, std::span<double> values) {
  std::vector<cplx> modes = spectrum_of(values);
  for (std::size_t m = 0; m < modes.size(); ++m)
    if (std::abs(grid.wavenumber(m)) > xi_max) modes[m] = 0.0;
  real_inverse(modes, values);
}

// Filtered right-hand side (xi^4 - xi^2) u_hat - xi^2 (u^2)_hat.
std::vector<double> acceleration(const PeriodicGrid& grid, double xi_max, std::span<const double> u) {
  std::vector<double> square(u.size());
  std::transform(u.begin(), u.end(), square.begin(), [](double v) { return v * v; });
  std::vector<cplx> linear = spectrum_of(u);
  const std::vector<cplx> quadratic = spectrum_of(square);
  for (std::size_t m = 0; m < linear.size(); ++m) {
    const double xi = grid.wavenumber(m);
    const double xi2 = xi * xi;
    linear[m] = std::abs(xi) > xi_max ? cplx(0.0) : (xi2 * xi2 - xi2) * linear[m] - xi2 * quadratic[m];
  }
  std::vector<double> result(u.size());
  real_inverse(linear, result);
  return result;
}

}  // namespace

double PeriodicGrid::wavenumber(std::size_t m) const {
  const double index = m < (points + 1) / 2 ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(points);
  return 2.0 * pi * index / length;
}

PdeBlowup::PdeBlowup(double time, double max_abs, std::vector<double> spectrum)
    : ConvergenceError([&] {
        std::ostringstream message;
        message << "PDE blow-up at t = " << time << ": max |u| = " << max_abs << "; largest modes:";
        std::vector<std::size_t> order(spectrum.size());
        for (std::size_t m = 0; m < order.size(); ++m) order[m] = m;
        const std::size_t shown = std::min<std::size_t>(5, order.size());
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(shown), order.end(),
                          [&](std::size_t a, std::size_t b) { return spectrum[a] > spectrum[b]; });
        for (std::size_t i = 0; i < shown; ++i) message << " [" << order[i] << "] " << spectrum[order[i]];
        return message.str();
      }()),
      time_(time), max_abs_(max_abs), spectrum_(std::move(spectrum)) {}

PdeState initial_state(const InitialData& data, const PeriodicGrid& grid, double xi_max) {
  if (grid.points < 4 || !(grid.length > 0.0)) throw DomainError("periodic grid needs at least 4 points");
  if (!(xi_max > 0.0) || xi_max > 0.9) throw DomainError("spectral cutoff must lie in (0, 0.9]");
  PdeState state{grid, std::vector<double>(grid.points), std::vector<double>(grid.points), xi_max, 0.0};
  for (std::size_t j = 0; j < grid.points; ++j) {
    const DataSample sample = data.sample(grid.at(j));
    state.u[j] = sample.u0;
    state.ut[j] = sample.u1;
  }
  return state;
}

PdeState evolve(PdeState state, double t_end, const PdeOptions& options) {
  if (!(options.dt > 0.0)) throw DomainError("time step must be positive");
  const double span = t_end - state.t;
  if (span == 0.0) return state;
  const double fastest = 0.5;  // max of xi sqrt(1 - xi^2) over |xi| < 1
  if (fastest * options.dt >= 1.0) throw DomainError("time step does not resolve the fastest retained mode");
  const auto steps = static_cast<std::size_t>(std::ceil(std::abs(span) / options.dt - 1e-12));
  const double h = span / static_cast<double>(steps);

  project(state.grid, state.xi_max, state.u);
  project(state.grid, state.xi_max, state.ut);
  std::vector<double> accel = acceleration(state.grid, state.xi_max, state.u);
  const double start = state.t;
  for (std::size_t n = 1; n <= steps; ++n) {
    for (std::size_t j = 0; j < state.u.size(); ++j) {
      state.ut[j] += 0.5 * h * accel[j];
      state.u[j] += h * state.ut[j];
    }
    project(state.grid, state.xi_max, state.u);
    accel = acceleration(state.grid, state.xi_max, state.u);
    for (std::size_t j = 0; j < state.u.size(); ++j) state.ut[j] += 0.5 * h * accel[j];
    project(state.grid, state.xi_max, state.ut);
    state.t = n == steps ? t_end : start + h * static_cast<double>(n);

    const double max_abs = std::abs(*std::max_element(state.u.begin(), state.u.end(),
                                                      [](double a, double b) { return std::abs(a) < std::abs(b); }));
    if (!(max_abs <= options.blowup_threshold)) {
      std::vector<double> spectrum;
      for (const cplx& mode : spectrum_of(state.u)) spectrum.push_back(std::abs(mode));
      throw PdeBlowup(state.t, max_abs, std::move(spectrum));
    }
  }
  return state;
}

PdeState evolve(const InitialData& data, double t_end, const PdeOptions& options, const PeriodicGrid& grid) {
  return evolve(initial_state(data, grid, options.xi_max), t_end, options);
}

double out_of_band_magnitude(const PdeState& state) {
  const std::vector<cplx> modes = spectrum_of(state.u);
  double worst = 0.0;
  for (std::size_t m = 0; m < modes.size(); ++m)
    if (std::abs(state.grid.wavenumber(m)) > state.xi_max) worst = std::max(worst, std::abs(modes[m]));
  return worst;
}

double interpolate(const PdeState& state, double x) {
  const std::vector<cplx> modes = spectrum_of(state.u);
  const std::size_t n = modes.size();
  double sum = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    // The Nyquist slot has no sign; split it evenly between +-xi.
    const bool nyquist = n % 2 == 0 && m == n / 2;
    const double xi = state.grid.wavenumber(m);
    const cplx term = modes[m] * std::exp(I1 * (xi * (x - state.grid.x_min)));
    sum += nyquist ? modes[m].real() * std::cos(xi * (x - state.grid.x_min)) : term.real();
  }
  return sum / static_cast<double>(n);
}

double mass_rate(const PdeState& state) {
  double sum = 0.0;
  for (double value : state.ut) sum += value;
  return sum * state.grid.step();
}

void write_snapshot_csv(const PdeState& state, std::ostream& out) {
  out << "x,u,ut\n" << std::setprecision(17);
  for (std::size_t j = 0; j < state.u.size(); ++j) out << state.grid.at(j) << ',' << state.u[j] << ',' << state.ut[j] << '\n';
}

ComparisonReport compare_asymptotic(const PdeState& state, std::span<const AsymptoticResult> results) {
  ComparisonReport report;
  report.caveat =
      "regularised oracle: modes |xi| > xi_max removed. Sector-I leading order lies below the Schwartz tail of the "
      "data at reachable (x, t); differences are diagnostic only.";
  const double x_end = state.grid.x_min + state.grid.length;
  for (const AsymptoticResult& result : results) {
    if (std::abs(result.t - state.t) > 1e-12 * std::max(1.0, std::abs(state.t))) continue;
    if (result.x < state.grid.x_min || result.x >= x_end) continue;
    ComparisonRow row;
    row.x = result.x;
    row.t = result.t;
    row.u_pde = interpolate(state, result.x);
    row.u_leading = result.u_leading;
    row.difference = row.u_pde - row.u_leading;
    row.error_scale = result.error_scale.xN_term + result.error_scale.log_term;
    row.outside_asymptotic_regime = std::abs(row.u_pde) > 10.0 * (std::abs(row.u_leading) + row.error_scale);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace bsq
