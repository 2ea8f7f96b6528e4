#include "boussinesq/model_rh.hpp"

#include <cmath>

#include "boussinesq/special.hpp"

namespace bsq {

namespace {

constexpr double max_modulus = 1e3;
constexpr double ray_guard = 1e-12;

double arg0(cplx z) {
  const double a = std::arg(z);
  return a > 0.0 ? a : a + 2.0 * pi;
}

struct ColumnData {
  cplx rotation;
  double scale_exponent;  // constant is e^{pi nu * scale_exponent}
};

ColumnData first_column(CrossSector s) {
  switch (s) {
    case CrossSector::s1_upper:
    case CrossSector::s2: return {std::polar(1.0, -pi / 4), 0.25};
    case CrossSector::s3:
    case CrossSector::s4: return {std::polar(1.0, 3 * pi / 4), 1.25};
    case CrossSector::s1_lower: return {std::polar(1.0, -pi / 4), 2.25};
  }
  return {};
}

ColumnData second_column(CrossSector s) {
  switch (s) {
    case CrossSector::s2:
    case CrossSector::s3: return {std::polar(1.0, -3 * pi / 4), -0.75};
    case CrossSector::s4:
    case CrossSector::s1_lower: return {std::polar(1.0, pi / 4), -1.75};
    case CrossSector::s1_upper: return {std::polar(1.0, pi / 4), 0.25};
  }
  return {};
}

// arg_0 continued into the sector, so the s1 formulas stay analytic across the positive axis.
double sector_arg(cplx z, CrossSector sector) {
  const double a = arg0(z);
  if (sector == CrossSector::s1_upper && a > 1.5 * pi) return a - 2.0 * pi;
  if (sector == CrossSector::s1_lower && a < 0.5 * pi) return a + 2.0 * pi;
  return a;
}

cplx sector_power(cplx z, CrossSector sector, double exponent) {
  return std::exp(I1 * exponent * cplx(std::log(std::abs(z)), sector_arg(z, sector)));
}

}  // namespace

double nu_from_q(cplx q) { return -std::log1p(std::norm(q)) / (2.0 * pi); }

ModelSolution model_solution(cplx q) {
  ModelSolution sol;
  sol.q = q;
  sol.nu = nu_from_q(q);
  if (std::abs(sol.nu) < trivial_nu) return sol;
  const double nu = sol.nu;
  const cplx gamma_plus = std::exp(log_gamma(cplx(0.0, nu)));
  const cplx gamma_minus = std::exp(log_gamma(cplx(0.0, -nu)));
  const double root = std::sqrt(2.0 * pi);
  sol.beta12 = root * std::polar(1.0, pi / 4) * std::exp(1.5 * pi * nu) / (q * gamma_plus);
  sol.beta21 = root * std::polar(1.0, -pi / 4) * std::exp(-2.5 * pi * nu) / (-std::conj(q) * gamma_minus);
  sol.m1X(0, 1) = sol.beta12;
  sol.m1X(1, 0) = sol.beta21;
  return sol;
}

cplx power_cut_positive(cplx z, double nu, double p) {
  const cplx log0(std::log(std::abs(z)), arg0(z));
  return std::exp(I1 * nu * p * log0);
}

CrossSector sector_of(cplx z) {
  const double a = arg0(z);
  if (a < pi / 4) return CrossSector::s1_upper;
  if (a < 3 * pi / 4) return CrossSector::s2;
  if (a < 5 * pi / 4) return CrossSector::s3;
  if (a < 7 * pi / 4) return CrossSector::s4;
  return CrossSector::s1_lower;
}

CrossSector plus_side(CrossRay ray) {
  switch (ray) {
    case CrossRay::x1: return CrossSector::s2;
    case CrossRay::x2: return CrossSector::s3;
    case CrossRay::x3: return CrossSector::s4;
    case CrossRay::x4: return CrossSector::s1_lower;
  }
  return CrossSector::s1_upper;
}

CrossSector minus_side(CrossRay ray) {
  switch (ray) {
    case CrossRay::x1: return CrossSector::s1_upper;
    case CrossRay::x2: return CrossSector::s2;
    case CrossRay::x3: return CrossSector::s3;
    case CrossRay::x4: return CrossSector::s4;
  }
  return CrossSector::s1_upper;
}

Mat3 model_mX_in(const ModelSolution& sol, cplx z, CrossSector sector) {
  Mat3 m = Mat3::Identity();
  if (std::abs(sol.nu) < trivial_nu) return m;
  if (std::abs(z) > max_modulus) throw DomainError("model problem evaluated only for |z| <= 1e3");
  if (z == cplx{0.0, 0.0}) throw DomainError("model problem evaluated at the cross centre");
  const double nu = sol.nu;
  const ColumnData c1 = first_column(sector);
  const ColumnData c2 = second_column(sector);
  const cplx scale1 = std::exp(pi * nu * c1.scale_exponent) * sector_power(z, sector, nu);
  const cplx scale2 = std::exp(pi * nu * c2.scale_exponent) * sector_power(z, sector, -nu);
  const cplx zeta1 = c1.rotation * z;
  const cplx zeta2 = c2.rotation * z;
  m(0, 0) = scale1 * pcf_scaled(cplx(0.0, -nu), zeta1);
  m(1, 0) = scale1 * c1.rotation * sol.beta21 * pcf_scaled(cplx(-1.0, -nu), zeta1);
  m(1, 1) = scale2 * pcf_scaled(cplx(0.0, nu), zeta2);
  m(0, 1) = scale2 * c2.rotation * sol.beta12 * pcf_scaled(cplx(-1.0, nu), zeta2);
  return m;
}

Mat3 model_mX(cplx q, cplx z) {
  const double phase = std::arg(z);
  for (double ray : {pi / 4, 3 * pi / 4, -3 * pi / 4, -pi / 4})
    if (std::abs(std::remainder(phase - ray, 2 * pi)) < ray_guard) throw DomainError("z lies on the cross");
  return model_mX_in(model_solution(q), z, sector_of(z));
}

Mat3 model_vX(cplx q, cplx z, CrossRay ray) {
  const double nu = nu_from_q(q);
  const double weight = 1.0 + std::norm(q);
  const cplx up = power_cut_positive(z, nu, -2.0) * std::exp(0.5 * I1 * z * z);
  const cplx down = power_cut_positive(z, nu, 2.0) * std::exp(-0.5 * I1 * z * z);
  Mat3 v = Mat3::Identity();
  switch (ray) {
    case CrossRay::x1: v(0, 1) = -std::conj(q) / weight * up; break;
    case CrossRay::x2: v(1, 0) = q * down; break;
    case CrossRay::x3: v(0, 1) = std::conj(q) * up; break;
    case CrossRay::x4: v(1, 0) = -q / weight * down; break;
  }
  return v;
}

}  // namespace bsq
