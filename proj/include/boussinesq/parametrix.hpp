#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "boussinesq/arc_quadrature.hpp"
#include "boussinesq/model_rh.hpp"
#include "boussinesq/phase.hpp"
#include "boussinesq/spectral.hpp"

namespace bsq {

enum class ArcSide { outer, inner };

// delta, chi and Delta for one spectral data set and one tau. The Stieltjes
// measure is d g with g(theta) = ln(1 + r1 r2 (e^{i theta})) splined on the
// spectral grid; all arc integrals run from i to k1.
class GlobalParametrix {
 public:
  GlobalParametrix(const SpectralData& spec, const PhaseContext& ctx);

  const PhaseContext& context() const { return ctx_; }
  double nu() const { return nu_; }
  double g(double theta) const;
  double dg(double theta) const;
  // Cauchy evaluations closer than ten grid spacings switch to singularity subtraction.
  double near_contour_distance() const { return 10.0 * spacing_; }
  double distance_to_arc(cplx k) const;

  // Normalised Cauchy transform exp(-(1/2 pi i) int g ds / (s - k)).
  cplx delta(cplx k) const;
  // Boundary value on the arc from the outer (|k| > 1) or inner side, by
  // Richardson extrapolation of offsets (1 +- h) e^{i theta}.
  cplx delta_boundary(double theta, ArcSide side) const;
  // Branch of ln(k - s) for s = e^{i theta_s} on the arc.
  cplx log_branch(cplx k, double theta_s) const;
  cplx chi(cplx k) const;

  cplx Delta33(cplx k) const;
  Mat3 Delta(cplx k) const;

  // (1/2 pi i) int g ds: the 1/k coefficient of ln delta at infinity.
  cplx delta_moment() const;
  // -(sqrt3 / 2 pi) int g (1 + s^-2) ds: the 1/k coefficient of Delta33 at infinity.
  cplx delta33_moment() const;
  // Stieltjes integral int F(theta) dg over the arc, with optional singular points.
  cplx stieltjes(const std::function<cplx(double)>& integrand, const std::vector<double>& singular = {}) const;

 private:
  cplx cauchy_log(cplx k) const;

  PhaseContext ctx_;
  double spacing_ = 0.0;
  double nu_ = 0.0;
  bool trivial_ = false;
  std::shared_ptr<const boost::math::interpolators::cardinal_cubic_b_spline<double>> spline_;
  ArcIntegrator integrator_;
};

double nu_of(const SpectralData& spec, const PhaseContext& ctx);

struct ParametrixBundle {
  double x = 0.0;
  double nu = 0.0;
  cplx chi_k1;
  cplx d0;
  cplx q;
  Mat3 Y = Mat3::Identity();
  cplx zstar;
  cplx r1_k1;
  cplx r2_k1;
  ModelSolution model;
};

ParametrixBundle local_scalars(const GlobalParametrix& global, const SpectralData& spec, double x);
// d1(k) = e^{2(chi(k) - chi(k1))} zhat^{-2i nu} times the ratio of delta products at k and at k1.
cplx d1_eval(const GlobalParametrix& global, double x, cplx k, double radius = 0.1);
Mat3 local_parametrix(const GlobalParametrix& global, const ParametrixBundle& bundle, cplx k, double radius = 0.1);

}  // namespace bsq
