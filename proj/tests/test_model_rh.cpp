#include <gtest/gtest.h>

#include <cmath>

#include "boussinesq/model_rh.hpp"
#include "boussinesq/special.hpp"

using namespace bsq;

namespace {

double ray_angle(CrossRay ray) {
  switch (ray) {
    case CrossRay::x1: return pi / 4;
    case CrossRay::x2: return 3 * pi / 4;
    case CrossRay::x3: return -3 * pi / 4;
    case CrossRay::x4: return -pi / 4;
  }
  return 0.0;
}

double jump_residual(cplx q, CrossRay ray, double radius) {
  const ModelSolution sol = model_solution(q);
  const cplx z = std::polar(radius, ray_angle(ray));
  const Mat3 plus = model_mX_in(sol, z, plus_side(ray));
  const Mat3 minus = model_mX_in(sol, z, minus_side(ray));
  return max_abs(plus - minus * model_vX(q, z, ray));
}

}  // namespace

TEST(ModelRH, TrivialData) {
  EXPECT_EQ(max_abs(model_mX(0.0, cplx(1.0, 2.0)) - Mat3::Identity()), 0.0);
  const ModelSolution sol = model_solution(0.0);
  EXPECT_EQ(max_abs(sol.m1X), 0.0);
  EXPECT_EQ(sol.nu, 0.0);
}

TEST(ModelRH, BetaProductIsNu) {
  for (cplx q : {cplx(0.1, 0.0), cplx(0.5, 0.2), cplx(2.0, 0.0), cplx(-0.3, 1.1)}) {
    const ModelSolution sol = model_solution(q);
    EXPECT_NEAR(std::abs(sol.beta12 * sol.beta21 - sol.nu), 0.0, 1e-12);
    EXPECT_NEAR(sol.nu, -std::log(1.0 + std::norm(q)) / (2 * pi), 1e-15);
    EXPECT_EQ(sol.m1X(0, 0), cplx(0.0, 0.0));
    EXPECT_EQ(sol.m1X(2, 2), cplx(0.0, 0.0));
  }
}

TEST(ModelRH, JumpResidualOnCross) {
  for (cplx q : {cplx(0.1, 0.0), cplx(0.5, 0.2), cplx(2.0, 0.0)})
    for (CrossRay ray : {CrossRay::x1, CrossRay::x2, CrossRay::x3, CrossRay::x4})
      for (double radius : {0.05, 0.7, 2.0, 5.0, 9.5, 30.0}) EXPECT_LT(jump_residual(q, ray, radius), 1e-8);
}

TEST(ModelRH, ContinuousAcrossPositiveAxis) {
  const ModelSolution sol = model_solution(cplx(0.5, 0.2));
  for (double radius : {0.3, 4.0, 12.0}) {
    const Mat3 upper = model_mX_in(sol, radius, CrossSector::s1_upper);
    const Mat3 lower = model_mX_in(sol, radius, CrossSector::s1_lower);
    EXPECT_LT(max_abs(upper - lower), 1e-12);
  }
}

TEST(ModelRH, UnitDeterminant) {
  for (cplx z : {cplx(0.3, 0.1), cplx(-4.0, 1.0), cplx(2.0, -7.0), cplx(-0.5, -0.2)})
    EXPECT_LT(std::abs(model_mX(cplx(0.5, 0.2), z).determinant() - 1.0), 1e-12);
}

TEST(ModelRH, LargeZCoefficient) {
  // z (m - I) = m1X + m2 / z + m3 / z^2 + ...; radii 50, 100, 200 remove m2 and m3.
  const cplx q = 0.3;
  const ModelSolution sol = model_solution(q);
  for (double angle : {0.3, 1.2, 2.7, -2.0, -0.3}) {
    auto scaled = [&](double radius) {
      const cplx z = std::polar(radius, angle);
      return Mat3(z * (model_mX(q, z) - Mat3::Identity()));
    };
    const Mat3 first = 2.0 * scaled(100.0) - scaled(50.0);
    const Mat3 second = 2.0 * scaled(200.0) - scaled(100.0);
    const Mat3 limit = (4.0 * second - first) / 3.0;
    EXPECT_LT(max_abs(limit - sol.m1X), 1e-6);
    EXPECT_LT(max_abs(scaled(50.0) - sol.m1X), 2e-4);
  }
  EXPECT_LT(max_abs(model_mX(q, std::polar(900.0, 0.4)) - Mat3::Identity()), 1e-3);
}

TEST(ModelRH, DomainGuards) {
  EXPECT_THROW(model_mX(0.3, std::polar(2.0, pi / 4)), DomainError);
  EXPECT_THROW(model_mX(0.3, 2000.0 * I1), DomainError);
}

TEST(GammaIdentity, ModulusOnImaginaryAxis) {
  for (double nu : {-0.5, -0.2, -0.05, -1e-3, -1e-4}) {
    const double lhs = std::exp(log_gamma(cplx(0.0, nu)).real());
    const double rhs = std::sqrt(2 * pi) / (std::sqrt(-nu) * std::sqrt(std::exp(-pi * nu) - std::exp(pi * nu)));
    EXPECT_NEAR(lhs / rhs, 1.0, 1e-12);
  }
}
