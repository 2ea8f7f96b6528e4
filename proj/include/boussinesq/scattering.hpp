#pragma once

#include <string>
#include <utility>
#include <vector>

#include "boussinesq/initial_data.hpp"
#include "boussinesq/types.hpp"

namespace bsq {

struct ScatteringState {
  cplx k;
  Mat3 X;   // Jost solution at the left grid end
  Mat3 s;
  Mat3 sA;
  std::vector<std::string> warnings;
};

struct JostOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
};

// Vandermonde-type conjugator with rows 1, l_j, l_j^2.
Mat3 lax_P(cplx k);
Mat3 lax_U(const InitialData& data, double x, cplx k);

// X(x,k) = e^{xL} Y e^{-xL} with Y' = e^{-xL} U e^{xL} Y, Y(+inf) = I, integrated right to left.
ScatteringState solve_jost(const InitialData& data, cplx k, const JostOptions& options = {});

// Max-norm residual of the Volterra equation for X, re-substituted by Simpson
// quadrature on the data grid.
double volterra_residual(const InitialData& data, cplx k, const JostOptions& options = {});

// det X over the data grid; worst deviation from 1.
double jost_det_defect(const InitialData& data, cplx k, const JostOptions& options = {});

std::pair<Mat3, Mat3> scattering_matrices(const InitialData& data, cplx k, const JostOptions& options = {});

cplx reflection_r1(const InitialData& data, cplx k, const JostOptions& options = {});
cplx reflection_r2(const InitialData& data, cplx k, const JostOptions& options = {});

// Along-circle limit of r_j at k = +-1 from symmetric offsets e^{+-i eps},
// Richardson-extrapolated in eps.
cplx reflection_limit(int j, const InitialData& data, double sign, const JostOptions& options = {});

}  // namespace bsq
