#pragma once

#include <array>

#include "boussinesq/types.hpp"

namespace bsq {

// Cube root of unity e^{2 pi i / 3}.
inline const cplx omega = std::polar(1.0, 2.0 * pi / 3.0);

// Sixth roots of unity kappa_j = e^{pi i (j-1)/3}, j = 1..6.
cplx kappa(int j);

// Cyclic permutation (A^3 = I) and reflection (B^2 = I) generating the jump symmetries.
const Mat3& mat_A();
const Mat3& mat_B();

// sigma3 restricted to the upper-left block: diag(1, -1, 0).
const Mat3& sigma3_tilde();

// Ordered pair of sheets for the phase differences that enter the jumps.
enum class PhasePair { p21, p31, p32 };

PhasePair make_pair(int i, int j);

cplx lambda(int j, cplx k);
cplx zeta_fun(int j, cplx k);

// Closed-form phase Phi_21 and its k-derivatives.
cplx phase21(double tau, cplx k);
cplx phase21_dk(double tau, cplx k);
cplx phase21_dkk(double tau, cplx k);
// Partial derivative with respect to tau at fixed k.
cplx phase21_dtau(cplx k);

cplx phase(PhasePair pair, double tau, cplx k);
cplx phase(int i, int j, double tau, cplx k);

// Same phase assembled from lambda and zeta_fun; an independent evaluation path.
cplx phase_from_sheets(int i, int j, double tau, cplx k);

inline constexpr double default_tau_max = 0.3;

struct PhaseContext {
  double tau = 0.0;
  cplx k1, k2, k3, k4;
  double arg_k1 = 0.0;
  cplx zstar;
  cplx hess;
};

// Closed-form saddles of Phi_21. At tau = 0 the limit k1 = i, k2 = -i is returned,
// with k3 = +inf and k4 = 0.
PhaseContext saddle_points(double tau, double tau_max = 1.0);

struct HessianZstar {
  cplx hess;
  cplx zstar;
};

HessianZstar hessian_and_zstar(double tau);

// Sign of Re Phi_ij with a zero band.
int signature(PhasePair pair, double tau, cplx k, double band = 1e-14);

struct ZMap {
  cplx z;
  cplx zhat;
};

// Local coordinate z = zstar sqrt(x) (k - k1) zhat with x(Phi(k) - Phi(k1)) = -i z^2 / 2.
ZMap zmap(double x, const PhaseContext& ctx, cplx k, double radius = 0.1);

// Largest radius initial / 2^n (n <= 10) for which zhat stays on the principal
// sheet over a sampled disk around k1.
double admissible_radius(const PhaseContext& ctx, double initial = 0.1);

}  // namespace bsq
