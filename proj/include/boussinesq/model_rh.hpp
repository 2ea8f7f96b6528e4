#pragma once

#include "boussinesq/types.hpp"

namespace bsq {

// Sectors of C minus the cross of rays at angles pi/4, 3pi/4, 5pi/4, 7pi/4,
// labelled by arg_0 z in (0, 2pi).
enum class CrossSector { s1_upper, s2, s3, s4, s1_lower };

// Rays X1..X4 at angles pi/4, 3pi/4, -3pi/4, -pi/4, oriented outward.
enum class CrossRay { x1 = 1, x2, x3, x4 };

struct ModelSolution {
  cplx q;
  double nu = 0.0;
  cplx beta12;
  cplx beta21;
  Mat3 m1X = Mat3::Zero();
};

// |nu| below this is treated as the q = 0 branch (m^X = I, m1X = 0).
inline constexpr double trivial_nu = 1e-10;

double nu_from_q(cplx q);
ModelSolution model_solution(cplx q);

// z_(0)^{i nu p}: branch cut on [0, inf), arg_0 in (0, 2pi].
cplx power_cut_positive(cplx z, double nu, double p);

CrossSector sector_of(cplx z);
// Sectors on the left (+) and right (-) of an outward ray.
CrossSector plus_side(CrossRay ray);
CrossSector minus_side(CrossRay ray);

// Parabolic-cylinder solution of the model problem in the upper-left block.
// Rejects z on the cross and |z| > 1e3.
Mat3 model_mX(cplx q, cplx z);
// Analytic continuation of the given sector's formula to z; on a ray this is a boundary value.
Mat3 model_mX_in(const ModelSolution& sol, cplx z, CrossSector sector);

Mat3 model_vX(cplx q, cplx z, CrossRay ray);

}  // namespace bsq
