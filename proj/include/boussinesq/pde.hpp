#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "boussinesq/asymptotics.hpp"
#include "boussinesq/initial_data.hpp"
#include "boussinesq/types.hpp"

namespace bsq {

// Periodic grid x_j = x_min + j length / points, j < points.
struct PeriodicGrid {
  double x_min = -320.0;
  double length = 640.0;
  std::size_t points = 2048;

  double step() const { return length / static_cast<double>(points); }
  double at(std::size_t j) const { return x_min + step() * static_cast<double>(j); }
  // Angular wavenumber of FFT slot m.
  double wavenumber(std::size_t m) const;
};

// The regularised equation u_tt = u_xx + (u^2)_xx + u_xxxx with every Fourier
// mode |xi| > xi_max removed; the unfiltered equation is ill-posed for |xi| > 1.
struct PdeState {
  PeriodicGrid grid;
  std::vector<double> u;
  std::vector<double> ut;
  double xi_max = 0.8;
  double t = 0.0;
};

struct PdeOptions {
  double xi_max = 0.8;
  double dt = 0.005;
  double blowup_threshold = 1e3;
};

// Raised when max |u| exceeds the blow-up threshold; carries the modulus spectrum of u.
class PdeBlowup : public ConvergenceError {
 public:
  PdeBlowup(double time, double max_abs, std::vector<double> spectrum);
  double time() const { return time_; }
  double max_abs() const { return max_abs_; }
  const std::vector<double>& spectrum() const { return spectrum_; }

 private:
  double time_, max_abs_;
  std::vector<double> spectrum_;
};

// Samples of the initial data; no filtering, so t = 0 is reproduced exactly.
PdeState initial_state(const InitialData& data, const PeriodicGrid& grid, double xi_max = 0.8);

// Stormer-Verlet steps of equal size from state.t to t_end (backwards when
// t_end < state.t). Each step is the exact inverse of the step of opposite sign.
PdeState evolve(PdeState state, double t_end, const PdeOptions& options = {});
PdeState evolve(const InitialData& data, double t_end, const PdeOptions& options = {}, const PeriodicGrid& grid = {});

// Largest modulus of a Fourier coefficient of u above the cutoff.
double out_of_band_magnitude(const PdeState& state);
// Trigonometric interpolant of u.
double interpolate(const PdeState& state, double x);
double mass_rate(const PdeState& state);  // integral of u_t

void write_snapshot_csv(const PdeState& state, std::ostream& out);

struct ComparisonRow {
  double x = 0.0;
  double t = 0.0;
  double u_pde = 0.0;
  double u_leading = 0.0;
  double difference = 0.0;
  double error_scale = 0.0;
  bool outside_asymptotic_regime = false;
};

struct ComparisonReport {
  std::string caveat;
  std::vector<ComparisonRow> rows;
};

// Rows of the asymptotic table at the state's time and inside its grid. A row is
// flagged when |u_pde| > 10 (|u_leading| + error scale).
ComparisonReport compare_asymptotic(const PdeState& state, std::span<const AsymptoticResult> results);

}  // namespace bsq
