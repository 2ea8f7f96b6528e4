#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "boussinesq/initial_data.hpp"
#include "boussinesq/scattering.hpp"
#include "boussinesq/types.hpp"

namespace bsq {

enum class SpectralSource { computed, synthetic };

std::string to_string(SpectralSource source);

// Reflection coefficients on a uniform arc grid theta in [pi/2, 2pi/3), with
// cubic-spline interpolation in theta.
class SpectralData {
 public:
  SpectralData(std::vector<double> theta, std::vector<cplx> r1, std::vector<cplx> r2, SpectralSource source);

  std::span<const double> theta() const { return theta_; }
  std::span<const cplx> r1() const { return r1_; }
  std::span<const cplx> r2() const { return r2_; }
  SpectralSource source() const { return source_; }
  double spacing() const { return spacing_; }
  double theta_min() const { return theta_.front(); }
  double theta_max() const { return theta_.back(); }

  cplx r1_at(double theta) const;
  cplx r2_at(double theta) const;

  // Largest |r2 - tilde_r conj(r1)| over the grid and smallest 1 + r1 r2.
  double conjugation_defect() const;
  double min_one_plus_product() const;

 private:
  struct Splines;
  std::vector<double> theta_;
  std::vector<cplx> r1_, r2_;
  SpectralSource source_;
  double spacing_ = 0.0;
  std::shared_ptr<const Splines> splines_;
};

cplx tilde_r(cplx k);

// r_j / (1 + r1 r2) at an interpolated arc point.
cplx rhat(int j, const SpectralData& spec, double theta);

// Uniform arc grid from pi/2 to theta_end (inclusive).
std::vector<double> arc_grid(std::size_t points, double theta_end = 2.0 * pi / 3.0 - 1e-3);

// r1(theta) = amplitude exp(-decay / (theta - pi/2)) e^{i(phase_offset + phase_slope theta)}:
// flat to all orders at theta = pi/2.
struct BumpProfile {
  double amplitude = 0.8;
  double decay = 0.25;
  double phase_offset = 0.3;
  double phase_slope = 2.0;

  cplx r1(double theta) const;
};

SpectralData synthetic_spectral(const BumpProfile& profile, std::span<const double> theta);
SpectralData computed_spectral(const InitialData& data, std::span<const double> theta, int threads = 1,
                               const JostOptions& options = {});

void write_csv(const SpectralData& spec, std::ostream& out);
SpectralData read_csv(std::istream& in);

struct AssumptionReport {
  double mass_residual = 0.0;
  bool mass_ok = false;
  double endpoint_magnitude = 0.0;
  bool decay_ok = false;
  double min_abs_s11 = 0.0;  // over the unit-circle sample
  bool s11_ok = false;
  double residue_plus = 0.0;   // |(k-1) s11| extrapolated to k -> 1
  double residue_minus = 0.0;  // |(k+1) s11| extrapolated to k -> -1
  bool residues_ok = false;
  double max_r1_imag_axis = 0.0;  // approximate: off-circle integration
  double circle_relation = 0.0;
  bool circle_ok = false;
};

struct ReportGrid {
  std::size_t circle_points = 64;
  std::size_t axis_points = 8;
  double mass_tol = 1e-10;
  double decay_tol = 1e-14;
  double s11_floor = 1e-8;
  double residue_floor = 1e-8;
  double circle_tol = 1e-6;
  int threads = 1;
};

// Circle relation r1(1/(wk)) + r2(wk) + r1(w^2 k) r2(1/k) at |k| = 1.
cplx circle_relation(const InitialData& data, cplx k, const JostOptions& options = {});

AssumptionReport verify_assumptions(const InitialData& data, const ReportGrid& grid = {});

}  // namespace bsq
