#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <sstream>
#include <vector>

#include "boussinesq/pde.hpp"
#include "boussinesq/spectral.hpp"

using namespace bsq;

namespace {

constexpr double xi0 = 0.5;
constexpr double epsilon = 1e-6;

// 48 periods of cos(xi0 x) fit the domain exactly.
PeriodicGrid mode_grid() { return {0.0, 48.0 * 2.0 * pi / xi0, 2048}; }

PdeState linear_mode() {
  const PeriodicGrid grid = mode_grid();
  PdeState state{grid, std::vector<double>(grid.points), std::vector<double>(grid.points, 0.0), 0.8, 0.0};
  for (std::size_t j = 0; j < grid.points; ++j) state.u[j] = epsilon * std::cos(xi0 * grid.at(j));
  return state;
}

// Coefficient a of a cos(xi0 x) in u.
double mode_amplitude(const PdeState& state) {
  double sum = 0.0;
  for (std::size_t j = 0; j < state.u.size(); ++j) sum += state.u[j] * std::cos(xi0 * state.grid.at(j));
  return 2.0 * sum / static_cast<double>(state.u.size());
}

// Band-limited to far below the cutoff: the spectrum at |xi| = 0.8 is e^{-32} of its peak.
PdeState smooth_pulse(std::size_t points = 2048) {
  const PeriodicGrid grid{-320.0, 640.0, points};
  PdeState state{grid, std::vector<double>(points), std::vector<double>(points), 0.8, 0.0};
  for (std::size_t j = 0; j < points; ++j) {
    const double x = grid.at(j);
    state.u[j] = 0.05 * std::exp(-x * x / 200.0);
    state.ut[j] = -0.02 * x / 100.0 * std::exp(-x * x / 200.0);
  }
  return state;
}

double max_difference(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
  return worst;
}

}  // namespace

TEST(Pde, ZeroDataStaysZero) {
  const PdeState state = evolve(InitialData::zero(), 1.0);
  for (std::size_t j = 0; j < state.u.size(); ++j) {
    EXPECT_EQ(state.u[j], 0.0);
    EXPECT_EQ(state.ut[j], 0.0);
  }
  EXPECT_EQ(state.t, 1.0);
}

TEST(Pde, InitialDataReproducedExactly) {
  const InitialData data = InitialData::shaped(ProfileShape::gaussian, {0.3, 1.0, 0.0}, {0.2, 1.0, 0.0});
  const PdeState state = evolve(data, 0.0);
  for (std::size_t j = 0; j < state.u.size(); ++j) {
    const DataSample sample = data.sample(state.grid.at(j));
    EXPECT_EQ(state.u[j], sample.u0);
    EXPECT_EQ(state.ut[j], sample.u1);
  }
}

TEST(Pde, LinearDispersionFrequency) {
  const double omega = xi0 * std::sqrt(1.0 - xi0 * xi0);
  PdeState state = linear_mode();
  for (double t : {0.25, 0.5, 0.75, 1.0}) {
    state = evolve(state, t);
    const double measured = std::acos(mode_amplitude(state) / epsilon) / t;
    EXPECT_LT(std::abs(measured - omega) / omega, 1e-6) << t;
  }
}

TEST(Pde, SecondOrderInTime) {
  const double omega = xi0 * std::sqrt(1.0 - xi0 * xi0);
  std::vector<double> errors;
  for (double dt : {0.2, 0.1, 0.05}) {
    PdeOptions options;
    options.dt = dt;
    const PdeState state = evolve(linear_mode(), 1.0, options);
    errors.push_back(std::abs(mode_amplitude(state) - epsilon * std::cos(omega)));
  }
  EXPECT_NEAR(std::log2(errors[0] / errors[1]), 2.0, 0.05);
  EXPECT_NEAR(std::log2(errors[1] / errors[2]), 2.0, 0.05);
}

TEST(Pde, TimeReversalRoundTrip) {
  const PdeState start = smooth_pulse();
  const PdeState there = evolve(start, 2.0);
  EXPECT_GT(max_difference(there.u, start.u), 1e-3);
  const PdeState back = evolve(there, 0.0);
  EXPECT_EQ(back.t, 0.0);
  EXPECT_LT(max_difference(back.u, start.u), 1e-8);
  EXPECT_LT(max_difference(back.ut, start.ut), 1e-8);
}

TEST(Pde, FilterInvariantAndMassConservation) {
  const InitialData data = InitialData::shaped(ProfileShape::gaussian, {0.3, 1.0, 0.0}, {0.2, 1.0, 0.0});
  PdeState state = initial_state(data, PeriodicGrid{});
  PdeState projected = evolve(state, 1e-12);
  const double initial_mass = mass_rate(projected);
  for (double t : {0.5, 1.0, 1.5, 2.0}) {
    state = evolve(state, t);
    EXPECT_LT(out_of_band_magnitude(state), 1e-12) << t;
    EXPECT_LT(std::abs(mass_rate(state) - initial_mass), 1e-10 * t) << t;
  }
}

TEST(Pde, SpatialRefinementOfBandLimitedSolution) {
  const PdeState coarse = evolve(smooth_pulse(2048), 1.0);
  const PdeState fine = evolve(smooth_pulse(4096), 1.0);
  double worst = 0.0;
  for (std::size_t j = 0; j < coarse.u.size(); ++j) worst = std::max(worst, std::abs(coarse.u[j] - fine.u[2 * j]));
  EXPECT_LT(worst, 1e-10);
}

TEST(Pde, BlowupDetectorCarriesSpectrum) {
  PdeOptions options;
  options.blowup_threshold = 1e-2;
  try {
    evolve(smooth_pulse(), 1.0, options);
    FAIL() << "expected a blow-up report";
  } catch (const PdeBlowup& blowup) {
    EXPECT_EQ(blowup.spectrum().size(), 2048u);
    EXPECT_GT(blowup.max_abs(), 1e-2);
    EXPECT_NE(std::string(blowup.what()).find("largest modes"), std::string::npos);
  }
  EXPECT_THROW(initial_state(InitialData::zero(), PeriodicGrid{}, 0.95), DomainError);
}

TEST(Pde, RuntimeOfOneUnitOfTime) {
  const auto begin = std::chrono::steady_clock::now();
  evolve(smooth_pulse(), 1.0);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
  EXPECT_LT(seconds, 30.0);
}

TEST(CompareAsymptotic, TimeZeroRows) {
  const InitialData data = InitialData::shaped(ProfileShape::gaussian, {0.3, 1.0, 0.0}, {0.2, 1.0, 0.0});
  const PdeState state = evolve(data, 0.0);
  const SpectralData spec = synthetic_spectral(BumpProfile{}, arc_grid(65));
  std::vector<AsymptoticResult> rows;
  for (std::size_t j = 1100; j < 1300; j += 40) rows.push_back(u_leading(spec, state.grid.at(j), 0.0));
  const ComparisonReport report = compare_asymptotic(state, rows);
  ASSERT_EQ(report.rows.size(), rows.size());
  EXPECT_FALSE(report.caveat.empty());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(report.rows[i].u_leading, 0.0);
    EXPECT_LT(std::abs(report.rows[i].u_pde - data.sample(rows[i].x).u0), 1e-14);
  }
}

TEST(CompareAsymptotic, SmallGaussianAtTimeOne) {
  const InitialData data = InitialData::shaped(ProfileShape::gaussian, {0.01, 1.0, 0.0}, {0.005, 1.0, 0.0});
  const PdeState state = evolve(data, 1.0);
  const SpectralData spec = computed_spectral(data, arc_grid(65, 2.0 * pi / 3.0 - 0.05), 4);
  std::vector<AsymptoticResult> rows;
  for (double x = 20.0; x <= 40.0; x += 2.0) rows.push_back(u_leading(spec, x, 1.0));
  const ComparisonReport report = compare_asymptotic(state, rows);
  ASSERT_EQ(report.rows.size(), rows.size());
  for (const ComparisonRow& row : report.rows) {
    EXPECT_LT(std::abs(row.u_pde), 1e-3) << row.x;
    EXPECT_LT(std::abs(row.u_leading), 1e-3) << row.x;
  }
}

TEST(CompareAsymptotic, FlagsRowsOutsideTheRegime) {
  const PdeState state = smooth_pulse();
  AsymptoticResult quiet;
  quiet.x = 0.0;
  quiet.t = 0.0;
  quiet.error_scale = {1e-6, 1e-6};
  AsymptoticResult far = quiet;
  far.x = 200.0;
  const ComparisonReport report = compare_asymptotic(state, std::vector<AsymptoticResult>{quiet, far});
  ASSERT_EQ(report.rows.size(), 2u);
  EXPECT_TRUE(report.rows[0].outside_asymptotic_regime);
  EXPECT_FALSE(report.rows[1].outside_asymptotic_regime);
}

TEST(Pde, SnapshotCsv) {
  std::ostringstream out;
  write_snapshot_csv(smooth_pulse(64), out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,u,ut");
  int count = 0;
  while (std::getline(in, line)) ++count;
  EXPECT_EQ(count, 64);
}
