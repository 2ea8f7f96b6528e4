#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "boussinesq/types.hpp"

namespace bsq {

// Piecewise quadrature in theta for integrands built from a cubic spline on a
// uniform knot grid. Knot intervals get 20-point Gauss-Legendre; intervals that
// end at a listed singular point get tanh-sinh, which tolerates integrable
// endpoint singularities and boundary layers.
class ArcIntegrator {
 public:
  ArcIntegrator(double knot_origin, double knot_spacing) : origin_(knot_origin), spacing_(knot_spacing) {}

  template <class F>
  cplx integrate(F&& f, double a, double b, const std::vector<double>& singular = {}) const {
    if (!(b > a)) return 0.0;
    std::vector<double> cuts{a, b};
    const double first = std::ceil((a - origin_) / spacing_);
    for (double m = first;; m += 1.0) {
      const double t = origin_ + m * spacing_;
      if (t >= b) break;
      if (t > a) cuts.push_back(t);
    }
    for (double s : singular)
      if (s > a && s < b) cuts.push_back(s);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double x, double y) { return std::abs(x - y) < 1e-15; }),
               cuts.end());
    cplx total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double lo = cuts[i], hi = cuts[i + 1];
      const bool near_singular = std::any_of(singular.begin(), singular.end(), [&](double s) {
        return std::abs(s - lo) < 1e-15 || std::abs(s - hi) < 1e-15;
      });
      total += near_singular ? tanh_sinh_piece(f, lo, hi) : gauss_piece(f, lo, hi);
    }
    return total;
  }

 private:
  template <class F>
  static cplx gauss_piece(F& f, double lo, double hi) {
    return boost::math::quadrature::gauss<double, 20>::integrate([&](double t) { return f(t); }, lo, hi);
  }

  template <class F>
  static cplx tanh_sinh_piece(F& f, double lo, double hi) {
    boost::math::quadrature::tanh_sinh<double> rule(12);
    const double re = rule.integrate([&](double t) { return f(t).real(); }, lo, hi, 1e-14);
    const double im = rule.integrate([&](double t) { return f(t).imag(); }, lo, hi, 1e-14);
    return {re, im};
  }

  double origin_;
  double spacing_;
};

}  // namespace bsq
