#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "boussinesq/types.hpp"

namespace bsq {

// Taylor coefficients c_0..c_{count-1} of an analytic function at centre, from
// the trapezoid rule on |k - centre| = radius. The function must be analytic on
// the closed disk.
std::vector<cplx> taylor_coefficients(const std::function<cplx(cplx)>& f, cplx centre, double radius,
                                      std::size_t count, std::size_t nodes = 256);

// Samples of a uniform-grid function F and its transform
// Fhat(s) = (1/2 pi) int F(p) e^{-i p s} dp, with the inverse F(p) = int Fhat(s) e^{i p s} ds.
class FourierSplit {
 public:
  FourierSplit(double p_start, double p_step, std::vector<cplx> values);

  std::size_t size() const { return values_.size(); }
  double p(std::size_t j) const { return p_start_ + p_step_ * static_cast<double>(j); }
  double s(std::size_t m) const;
  double p_step() const { return p_step_; }
  double s_step() const { return s_step_; }
  const std::vector<cplx>& values() const { return values_; }
  const std::vector<cplx>& spectrum() const { return spectrum_; }

  // int_{s > cut} Fhat(s) e^{i p_j s} ds on the grid.
  std::vector<cplx> tail(double cut) const;
  // int_{s <= cut} Fhat(s) e^{s phase} ds for complex phase with Re phase >= 0.
  cplx head(double cut, cplx phase) const;
  // || s^order Fhat ||_{L^2} restricted to |s| <= band (all modes when band <= 0),
  // skipping modes with |Fhat| <= floor.
  double sobolev_norm(int order, double band = 0.0, double floor = 0.0) const;
  double l1_norm() const;

 private:
  double p_start_, p_step_, s_step_;
  std::vector<cplx> values_, spectrum_;
  double s_floor_ = 0.0;  // modes below carry a negligible share of the L^1 norm
};

struct DecompositionOptions {
  int order_N = 2;
  int M = 0;                          // 0 selects the smallest M >= N+1 passing the Sobolev check
  int max_M_increase = 4;
  cplx pole = cplx(0.0, 2.0);         // pole of the rational anchor, outside the closed sector
  double taylor_radius = 0.5;
  double half_width = 128.0;          // phi grid covers [-half_width, half_width)
  std::size_t fft_size = std::size_t{1} << 18;
  double sobolev_tolerance = 1e-6;
};

struct RemainderNorms {
  double x = 0.0;
  double linf = 0.0;
  double l1 = 0.0;  // with respect to |dk|
};

struct DecompositionDiagnostics {
  int M = 0;
  double sobolev_norm = 0.0;
  // Relative change of the norm when the top half band is dropped; modes at the
  // rounding-noise level of the samples are ignored.
  double sobolev_band_change = 0.0;
  double fhat_l1 = 0.0;
  std::vector<std::string> warnings;
};

// Split of r1 on the ray (-i inf, -i] into an analytic part on the closed sector
// arg k in [-pi/2, -pi/3], |k| >= 1 and a small remainder, using the phase
// phi = -(i/2)(k - 1/k) and a cut of the Fourier variable at x/4.
// r1 must be analytic on a disk of radius taylor_radius around -i and decay rapidly along the ray.
class RayDecomposition {
 public:
  using Function = std::function<cplx(cplx)>;

  RayDecomposition(Function r1, const DecompositionOptions& options = {});

  static constexpr cplx anchor() { return cplx(0.0, -1.0); }
  const DecompositionDiagnostics& diagnostics() const { return diagnostics_; }
  int M() const { return diagnostics_.M; }

  cplx r1(cplx k) const { return r1_(k); }
  cplx f0(cplx k) const;
  // f_a: analytic on the sector, continuous up to its boundary.
  cplx fa(double x, cplx k) const;
  cplx analytic(double x, cplx k) const { return f0(k) + fa(x, k); }

  struct RaySamples {
    std::vector<cplx> k;
    std::vector<cplx> value;
  };
  // Remainder r1 - analytic on the ray at the grid points phi_j <= -1.
  RaySamples remainder(double x) const;
  RemainderNorms remainder_norms(double x) const;

 private:
  cplx weight(cplx k) const;  // (k - k*)^M / k^{2M}
  void build(int M);

  Function r1_;
  DecompositionOptions options_;
  std::vector<cplx> numerator_;  // f0 = numerator(k - k*) / (k - pole)^{8M-1}
  FourierSplit split_;
  DecompositionDiagnostics diagnostics_;
};

// Split of a function on a unit-circle arc theta in [theta_a, theta_b] where
// psi = (1 - tau cos theta) sin theta is strictly monotone. The anchor f0 is a
// polynomial in k matching r and its first N+1 theta-derivatives at both ends.
class ArcDecomposition {
 public:
  using Function = std::function<cplx(double)>;

  ArcDecomposition(Function r, double theta_a, double theta_b, double tau, const DecompositionOptions& options = {});

  const DecompositionDiagnostics& diagnostics() const { return diagnostics_; }
  double psi(double theta) const;
  cplx f0(cplx k) const;
  cplx analytic(double x, cplx k) const;

  struct ArcSamples {
    std::vector<double> theta;
    std::vector<cplx> value;
  };
  ArcSamples remainder(double x) const;
  RemainderNorms remainder_norms(double x) const;

 private:
  double theta_of_psi(double value) const;

  Function r_;
  double theta_a_, theta_b_, tau_;
  DecompositionOptions options_;
  std::vector<cplx> poly_;  // monomial coefficients of f0 in k
  FourierSplit split_;
  DecompositionDiagnostics diagnostics_;
};

}  // namespace bsq
