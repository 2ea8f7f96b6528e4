#include <gtest/gtest.h>

#include <cmath>

#include "boussinesq/special.hpp"

using namespace bsq;

// Reference values from an independent 30-digit evaluation.
TEST(LogGamma, ReferenceValues) {
  struct Case {
    cplx z, value;
  };
  const Case cases[] = {
      {{0.0, 0.5}, {0.50220168137316594509, -1.8148546257003243819}},
      {{2.0, 3.0}, {-2.0928517530927333496, 2.3023965434668676262}},
      {{0.1, -0.7}, {-0.018070282873277272748, 1.6363028248511372492}},
      {{30.0, 0.1}, {71.25686949219063564, 0.3384440047287602197}},
      {{-0.4, 2.5}, {-3.8460123862127058337, -1.7668415732193839681}},
  };
  for (const auto& c : cases) EXPECT_LT(std::abs(log_gamma(c.z) - c.value), 1e-14 * (1 + std::abs(c.value)));
  EXPECT_THROW(log_gamma(-2.0), DomainError);
}

TEST(LogGamma, Recurrence) {
  for (cplx z : {cplx(0.3, 0.2), cplx(-1.7, 0.4), cplx(4.0, -6.0)}) {
    const cplx diff = log_gamma(z + 1.0) - log_gamma(z) - std::log(z);
    const double wrapped = std::remainder(diff.imag(), 2 * pi);
    EXPECT_NEAR(diff.real(), 0.0, 1e-13);
    EXPECT_NEAR(wrapped, 0.0, 1e-13);
  }
}

TEST(LogGamma, ImaginaryAxisModulus) {
  for (double nu = -0.5; nu <= -1e-4; nu *= 0.7) {
    const double expected = std::sqrt(2 * pi) / (std::sqrt(-nu) * std::sqrt(std::exp(-pi * nu) - std::exp(pi * nu)));
    EXPECT_NEAR(std::exp(log_gamma(cplx(0.0, nu)).real()) / expected, 1.0, 1e-12);
  }
}

TEST(ParabolicCylinder, ReferenceValues) {
  struct Case {
    cplx a, zeta, value;
  };
  const Case cases[] = {
      {{0.0, 0.3}, {1.5, -0.5}, {1.0718260036412418935, 0.19516456652749912581}},
      {{-1.0, 0.2}, {3.0, 2.0}, {0.23405839766617695712, -0.062549918779027214917}},
      {{0.0, 0.1}, {0.2, 7.9}, {0.83867083116319418026, 0.17515961755096683872}},
      {{-1.0, -0.05}, {9.0, 9.0}, {0.050353304542150270733, -0.064298551951191464273}},
      {{0.0, 0.25}, {40.0, -30.0}, {0.65613387192936998523, 0.97411819246442260334}},
      {{0.0, 0.7}, {-0.3, 0.4}, {0.76284321961752313963, -0.66203010256034924118}},
  };
  for (const auto& c : cases)
    EXPECT_LT(std::abs(pcf_scaled(c.a, c.zeta) - c.value), 1e-12 * std::abs(c.value)) << c.zeta;
}

TEST(ParabolicCylinder, NonNegativeIntegerOrderIsHermite) {
  // D_0 = e^{-z^2/4}, D_1 = z e^{-z^2/4}, D_2 = (z^2 - 1) e^{-z^2/4}.
  for (cplx z : {cplx(0.5, 0.5), cplx(3.0, -2.0), cplx(10.0, 1.0)}) {
    EXPECT_LT(std::abs(pcf_scaled(0.0, z) - 1.0), 1e-13);
    EXPECT_LT(std::abs(pcf_scaled(1.0, z) - z), 1e-13 * std::abs(z));
    EXPECT_LT(std::abs(pcf_scaled(2.0, z) - (z * z - 1.0)), 1e-13 * std::abs(z * z));
  }
}

TEST(ParabolicCylinder, AccurateOnBothSidesOfMethodSwitch) {
  const cplx a(0.0, -0.2);
  struct Case {
    cplx zeta, value;
  };
  const Case cases[] = {
      {{8.0 - 1e-9, 0.0}, {0.91441443510079398715, -0.4055224891191445221}},
      {{8.0 + 1e-9, 0.0}, {0.91441443508068850976, -0.40552248916412236812}},
      {{0.0, 8.0 - 1e-9}, {1.2528774573586335466, -0.55093911050016852832}},
      {{1.3597371445616653523, -7.8835978477912791644}, {0.69201931246525658453, -0.30429642608615304824}},
  };
  for (const auto& c : cases) EXPECT_LT(std::abs(pcf_scaled(a, c.zeta) - c.value), 1e-13) << c.zeta;
}
