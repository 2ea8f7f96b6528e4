#include "boussinesq/parametrix.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace bsq {

namespace {

using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;

constexpr double on_arc_tolerance = 1e-14;

cplx log_ratio(cplx a, cplx b) { return std::log(a / b); }

}  // namespace

GlobalParametrix::GlobalParametrix(const SpectralData& spec, const PhaseContext& ctx)
    : ctx_(ctx), spacing_(spec.spacing()), integrator_(spec.theta_min(), spec.spacing()) {
  if (ctx.arg_k1 > spec.theta_max() + 1e-12 || ctx.arg_k1 < spec.theta_min() - 1e-12)
    throw DomainError("arg k1 lies outside the spectral grid");
  std::vector<double> g(spec.theta().size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::log1p((spec.r1()[i] * spec.r2()[i]).real());
  trivial_ = std::all_of(g.begin(), g.end(), [](double v) { return v == 0.0; });
  spline_ = std::make_shared<Spline>(g.begin(), g.end(), spec.theta_min(), spec.spacing());
  nu_ = trivial_ ? 0.0 : -this->g(ctx.arg_k1) / (2.0 * pi);
}

double GlobalParametrix::g(double theta) const { return trivial_ ? 0.0 : (*spline_)(theta); }
double GlobalParametrix::dg(double theta) const { return trivial_ ? 0.0 : spline_->prime(theta); }

double GlobalParametrix::distance_to_arc(cplx k) const {
  const double theta = std::clamp(std::arg(k), pi / 2, ctx_.arg_k1);
  return std::abs(k - std::polar(1.0, theta));
}

cplx GlobalParametrix::stieltjes(const std::function<cplx(double)>& integrand,
                                 const std::vector<double>& singular) const {
  if (trivial_) return 0.0;
  return integrator_.integrate([&](double t) { return integrand(t) * dg(t); }, pi / 2, ctx_.arg_k1, singular);
}

cplx GlobalParametrix::cauchy_log(cplx k) const {
  const double a = pi / 2, b = ctx_.arg_k1;
  const double distance = distance_to_arc(k);
  if (distance < on_arc_tolerance) throw DomainError("delta evaluated on its jump contour");
  if (distance >= near_contour_distance()) {
    return integrator_.integrate(
               [&](double t) {
                 const cplx s = std::polar(1.0, t);
                 return g(t) * s / (s - k);
               },
               a, b) /
           (2.0 * pi);
  }
  // Subtract g at the nearest arc point; the remaining log integral is exact.
  const double t_near = std::clamp(std::arg(k), a, b);
  const double g_near = g(t_near);
  const cplx smooth = integrator_.integrate(
      [&](double t) {
        const cplx s = std::polar(1.0, t);
        return (g(t) - g_near) * s / (s - k);
      },
      a, b, {t_near});
  const cplx s_near = std::polar(1.0, t_near);
  const cplx start = I1, end = std::polar(1.0, b);
  // Split at the nearest point so each piece turns by less than pi as seen from k.
  cplx log_change = 0.0;
  if (t_near > a) log_change += log_ratio(s_near - k, start - k);
  if (t_near < b) log_change += log_ratio(end - k, s_near - k);
  return (smooth - I1 * g_near * log_change) / (2.0 * pi);
}

cplx GlobalParametrix::delta(cplx k) const {
  if (trivial_ || ctx_.arg_k1 <= pi / 2) return 1.0;
  return std::exp(-cauchy_log(k));
}

cplx GlobalParametrix::delta_boundary(double theta, ArcSide side) const {
  const double sign = side == ArcSide::outer ? 1.0 : -1.0;
  // Offsets must stay well inside the analytic neighbourhood bounded by the arc endpoints.
  const double endpoint_gap = std::min(theta - pi / 2, ctx_.arg_k1 - theta);
  if (!(endpoint_gap > 0.0)) throw DomainError("boundary value requested off the open arc");
  const double h0 = std::min(near_contour_distance(), 0.1 * endpoint_gap);
  std::array<cplx, 4> level;
  for (std::size_t i = 0; i < level.size(); ++i)
    level[i] = delta(std::polar(1.0 + sign * h0 / double(1 << i), theta));
  double factor = 2.0;
  for (std::size_t depth = 1; depth < level.size(); ++depth, factor *= 2.0)
    for (std::size_t i = 0; i + depth < level.size(); ++i) level[i] = (factor * level[i + 1] - level[i]) / (factor - 1.0);
  return level[0];
}

cplx GlobalParametrix::log_branch(cplx k, double theta_s) const {
  const cplx s = std::polar(1.0, theta_s);
  const cplx d = k - s;
  double angle = std::arg(d);
  if (angle <= pi / 2) angle += 2.0 * pi;  // window (pi/2, 5pi/2]
  if (s.real() < k.real() && k.real() < 0.0 && std::abs(k) > 1.0 && k.imag() > 0.0) angle -= 2.0 * pi;
  return {std::log(std::abs(d)), angle};
}

cplx GlobalParametrix::chi(cplx k) const {
  if (trivial_ || ctx_.arg_k1 <= pi / 2) return 0.0;
  std::vector<double> singular;
  if (distance_to_arc(k) < near_contour_distance()) singular.push_back(std::clamp(std::arg(k), pi / 2, ctx_.arg_k1));
  const cplx integral = stieltjes([&](double t) { return log_branch(k, t); }, singular);
  return -integral / (2.0 * pi * I1);
}

cplx GlobalParametrix::Delta33(cplx k) const {
  const cplx w2 = omega * omega;
  return delta(omega * k) * delta(1.0 / (w2 * k)) / (delta(w2 * k) * delta(1.0 / (omega * k)));
}

Mat3 GlobalParametrix::Delta(cplx k) const {
  Mat3 d = Mat3::Zero();
  d(0, 0) = Delta33(omega * k);
  d(1, 1) = Delta33(omega * omega * k);
  d(2, 2) = Delta33(k);
  return d;
}

cplx GlobalParametrix::delta_moment() const {
  if (trivial_) return 0.0;
  const cplx integral =
      integrator_.integrate([&](double t) { return g(t) * I1 * std::polar(1.0, t); }, pi / 2, ctx_.arg_k1);
  return integral / (2.0 * pi * I1);
}

cplx GlobalParametrix::delta33_moment() const {
  if (trivial_) return 0.0;
  const cplx integral = integrator_.integrate(
      [&](double t) {
        const cplx s = std::polar(1.0, t);
        return g(t) * (1.0 + 1.0 / (s * s)) * I1 * s;
      },
      pi / 2, ctx_.arg_k1);
  return -std::sqrt(3.0) / (2.0 * pi) * integral;
}

double nu_of(const SpectralData& spec, const PhaseContext& ctx) { return GlobalParametrix(spec, ctx).nu(); }

namespace {

// delta(1/k)^2 delta(w k) delta(w^2 k) / (delta(1/(w^2 k)) delta(1/(w k))).
cplx delta_product(const GlobalParametrix& global, cplx k) {
  const cplx w2 = omega * omega;
  const cplx inv = global.delta(1.0 / k);
  return inv * inv * global.delta(omega * k) * global.delta(w2 * k) /
         (global.delta(1.0 / (w2 * k)) * global.delta(1.0 / (omega * k)));
}

}  // namespace

ParametrixBundle local_scalars(const GlobalParametrix& global, const SpectralData& spec, double x) {
  if (x < 2.0) throw DomainError("local parametrix needs x >= 2");
  const PhaseContext& ctx = global.context();
  ParametrixBundle bundle;
  bundle.x = x;
  bundle.nu = global.nu();
  bundle.zstar = ctx.zstar;
  bundle.r1_k1 = spec.r1_at(ctx.arg_k1);
  bundle.r2_k1 = spec.r2_at(ctx.arg_k1);
  const double rt = tilde_r(ctx.k1).real();
  bundle.q = -bundle.r2_k1 / std::sqrt(rt);
  bundle.model = model_solution(bundle.q);
  bundle.chi_k1 = global.chi(ctx.k1);
  const double nu = bundle.nu;
  bundle.d0 = std::exp(2.0 * bundle.chi_k1) * std::exp(-I1 * nu * std::log(x)) *
              std::exp(-2.0 * I1 * nu * std::log(ctx.zstar)) * delta_product(global, ctx.k1);
  const cplx half_phase = 0.5 * x * phase21(ctx.tau, ctx.k1);
  const cplx root_d0 = std::sqrt(bundle.d0);
  const double root4 = std::pow(rt, 0.25);
  bundle.Y = Mat3::Identity();
  bundle.Y(0, 0) = std::exp(-half_phase) / (root_d0 * root4);
  bundle.Y(1, 1) = std::exp(half_phase) * root_d0 * root4;
  return bundle;
}

cplx d1_eval(const GlobalParametrix& global, double x, cplx k, double radius) {
  const PhaseContext& ctx = global.context();
  if (k == ctx.k1) return 1.0;
  const ZMap map = zmap(x, ctx, k, radius);
  const double nu = global.nu();
  return std::exp(2.0 * (global.chi(k) - global.chi(ctx.k1))) * std::exp(-2.0 * I1 * nu * std::log(map.zhat)) *
         delta_product(global, k) / delta_product(global, ctx.k1);
}

Mat3 local_parametrix(const GlobalParametrix& global, const ParametrixBundle& bundle, cplx k, double radius) {
  const ZMap map = zmap(bundle.x, global.context(), k, radius);
  if (map.z == cplx{0.0, 0.0}) throw DomainError("local parametrix evaluated at the saddle");
  const Mat3 mx = model_mX(bundle.q, map.z);
  return bundle.Y * mx * bundle.Y.inverse();
}

}  // namespace bsq
