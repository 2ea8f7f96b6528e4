#include "boussinesq/phase.hpp"

#include <cmath>
#include <limits>

namespace bsq {

namespace {

const double sqrt3 = std::sqrt(3.0);

void require_nonzero(cplx k) {
  if (k == cplx{0.0, 0.0}) throw DomainError("k = 0 is a pole of the phase functions");
}

void require_sheet(int j) {
  if (j < 1 || j > 3) throw DomainError("sheet index must be 1, 2 or 3");
}

cplx omega_pow(int j) { return std::polar(1.0, 2.0 * pi * j / 3.0); }

Mat3 build_A() {
  Mat3 a = Mat3::Zero();
  a(0, 2) = 1.0;
  a(1, 0) = 1.0;
  a(2, 1) = 1.0;
  return a;
}

Mat3 build_B() {
  Mat3 b = Mat3::Zero();
  b(0, 1) = 1.0;
  b(1, 0) = 1.0;
  b(2, 2) = 1.0;
  return b;
}

}  // namespace

cplx kappa(int j) {
  if (j < 1 || j > 6) throw DomainError("kappa index must be in 1..6");
  return std::polar(1.0, pi * (j - 1) / 3.0);
}

const Mat3& mat_A() {
  static const Mat3 a = build_A();
  return a;
}

const Mat3& mat_B() {
  static const Mat3 b = build_B();
  return b;
}

const Mat3& sigma3_tilde() {
  static const Mat3 s = Eigen::Vector3cd(1.0, -1.0, 0.0).asDiagonal();
  return s;
}

PhasePair make_pair(int i, int j) {
  if (i == 2 && j == 1) return PhasePair::p21;
  if (i == 3 && j == 1) return PhasePair::p31;
  if (i == 3 && j == 2) return PhasePair::p32;
  throw DomainError("phase pair must be (2,1), (3,1) or (3,2)");
}

cplx lambda(int j, cplx k) {
  require_nonzero(k);
  require_sheet(j);
  const cplx wk = omega_pow(j) * k;
  return I1 * (wk + 1.0 / wk) / (2.0 * sqrt3);
}

cplx zeta_fun(int j, cplx k) {
  require_nonzero(k);
  require_sheet(j);
  const cplx wk = omega_pow(j) * k;
  const cplx wk2 = wk * wk;
  return I1 * (wk2 + 1.0 / wk2) / (4.0 * sqrt3);
}

cplx phase21(double tau, cplx k) {
  require_nonzero(k);
  const cplx k2 = k * k;
  return (k2 - 1.0) / (2.0 * k) - (k2 * k2 - 1.0) / (4.0 * k2) * tau;
}

cplx phase21_dk(double tau, cplx k) {
  require_nonzero(k);
  const cplx inv = 1.0 / k;
  return 0.5 + 0.5 * inv * inv - tau * (0.5 * k + 0.5 * inv * inv * inv);
}

cplx phase21_dkk(double tau, cplx k) {
  require_nonzero(k);
  const cplx inv = 1.0 / k;
  const cplx inv3 = inv * inv * inv;
  return -inv3 - tau * (0.5 - 1.5 * inv3 * inv);
}

cplx phase21_dtau(cplx k) {
  require_nonzero(k);
  const cplx k2 = k * k;
  return -(k2 * k2 - 1.0) / (4.0 * k2);
}

cplx phase(PhasePair pair, double tau, cplx k) {
  switch (pair) {
    case PhasePair::p21: return phase21(tau, k);
    case PhasePair::p31: return -phase21(tau, omega * omega * k);
    case PhasePair::p32: return phase21(tau, omega * k);
  }
  return {};
}

cplx phase(int i, int j, double tau, cplx k) { return phase(make_pair(i, j), tau, k); }

cplx phase_from_sheets(int i, int j, double tau, cplx k) {
  make_pair(i, j);
  return (lambda(i, k) - lambda(j, k)) + (zeta_fun(i, k) - zeta_fun(j, k)) * tau;
}

HessianZstar hessian_and_zstar(double tau) {
  const PhaseContext ctx = saddle_points(tau);
  return {ctx.hess, ctx.zstar};
}

PhaseContext saddle_points(double tau, double tau_max) {
  if (!(tau >= 0.0) || tau >= 1.0 || tau > tau_max)
    throw DomainError("tau must lie in [0, tau_max] with tau_max < 1");
  PhaseContext ctx;
  ctx.tau = tau;
  if (tau == 0.0) {
    ctx.k1 = I1;
    ctx.k2 = -I1;
    ctx.k3 = std::numeric_limits<double>::infinity();
    ctx.k4 = 0.0;
  } else {
    const double s = std::sqrt(8.0 * tau * tau + 1.0);
    const double scale = 1.0 / (4.0 * tau);
    ctx.k1 = scale * cplx{1.0 - s, std::sqrt(2.0) * std::sqrt(4.0 * tau * tau - 1.0 + s)};
    ctx.k2 = std::conj(ctx.k1);
    ctx.k3 = scale * (1.0 + s + std::sqrt(2.0) * std::sqrt(1.0 - 4.0 * tau * tau + s));
    ctx.k4 = 1.0 / ctx.k3;
  }
  ctx.arg_k1 = std::arg(ctx.k1);
  const cplx k1 = ctx.k1;
  ctx.hess = (4.0 * tau - 3.0 * k1 - k1 * k1 * k1) / (4.0 * k1 * k1 * k1 * k1);
  // Root chosen at runtime so that -i k1 zstar > 0.
  cplx zs = std::sqrt(2.0) * std::polar(1.0, pi / 4.0) * std::sqrt(ctx.hess);
  if ((-I1 * k1 * zs).real() < 0.0) zs = -zs;
  ctx.zstar = zs;
  return ctx;
}

int signature(PhasePair pair, double tau, cplx k, double band) {
  const double re = phase(pair, tau, k).real();
  if (std::abs(re) <= band) return 0;
  return re > 0.0 ? 1 : -1;
}

ZMap zmap(double x, const PhaseContext& ctx, cplx k, double radius) {
  const cplx dk = k - ctx.k1;
  if (std::abs(dk) >= radius) throw DomainError("zmap evaluated outside the disk around k1");
  if (dk == cplx{0.0, 0.0}) return {cplx{0.0, 0.0}, cplx{1.0, 0.0}};
  const cplx dphi = phase21(ctx.tau, k) - phase21(ctx.tau, ctx.k1);
  const cplx radicand = 2.0 * I1 * dphi / (ctx.zstar * ctx.zstar * dk * dk);
  // zhat(k1) = 1; a radicand in the left half-plane means the disk is too large
  // for the principal root to stay continuous.
  if (radicand.real() <= 0.0) throw BranchError("zhat radicand left the principal sheet");
  const cplx zhat = std::sqrt(radicand);
  return {ctx.zstar * std::sqrt(x) * dk * zhat, zhat};
}

double admissible_radius(const PhaseContext& ctx, double initial) {
  double radius = initial;
  for (int halving = 0; halving <= 10; ++halving, radius *= 0.5) {
    bool ok = true;
    for (int ring = 1; ring <= 4 && ok; ++ring)
      for (int n = 0; n < 32 && ok; ++n) {
        const cplx k = ctx.k1 + std::polar(radius * ring / 4.0 * (1.0 - 1e-9), 2.0 * pi * n / 32.0);
        try {
          zmap(1.0, ctx, k, radius);
        } catch (const BranchError&) {
          ok = false;
        }
      }
    if (ok) return radius;
  }
  throw BranchError("no admissible disk radius around k1");
}

}  // namespace bsq
