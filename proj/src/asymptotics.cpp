#include "boussinesq/asymptotics.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "boussinesq/parallel.hpp"
#include "boussinesq/special.hpp"

namespace bsq {

namespace {

constexpr double quiet_nan = std::numeric_limits<double>::quiet_NaN();
// Positive nu up to this size is rounding in ln(1 + r1 r2) and is read as zero.
constexpr double nu_rounding = 1e-14;

double sector_nu(const GlobalParametrix& global) {
  const double nu = global.nu();
  if (nu > nu_rounding) throw DomainError("nu > 0: 1 + r1 r2 < 1 at k1, outside the Sector I setting");
  return nu > 0.0 ? 0.0 : nu;
}

// arg d0 + nu ln x: everything in route A that does not depend on x.
double arg_d0_constant(const GlobalParametrix& global) {
  const double nu = sector_nu(global);
  if (nu == 0.0) return 0.0;
  const PhaseContext& ctx = global.context();
  const cplx k1 = ctx.k1;
  const cplx w = omega, w2 = omega * omega;
  const cplx modulus_ratio = (1.0 / (w2 * k1) - k1) * (1.0 / (w * k1) - k1) /
                             (3.0 * (1.0 / k1 - k1) * (1.0 / k1 - k1) * ctx.zstar * ctx.zstar);
  // Only the endpoint s = k1 is singular; the other five points stay off the arc.
  const cplx integral = global.stieltjes(
      [&](double theta) {
        const cplx s = std::polar(1.0, theta);
        const double log_abs = 2.0 * std::log(std::abs(k1 - s)) + std::log(std::abs(1.0 / (w2 * k1) - s)) +
                               std::log(std::abs(1.0 / (w * k1) - s)) - 2.0 * std::log(std::abs(1.0 / k1 - s)) -
                               std::log(std::abs(w * k1 - s)) - std::log(std::abs(w2 * k1 - s));
        return cplx(log_abs);
      },
      {ctx.arg_k1});
  return nu * std::log(std::abs(modulus_ratio)) + integral.real() / (2.0 * pi);
}

}  // namespace

double wrap_angle(double angle) {
  double wrapped = std::remainder(angle, 2.0 * pi);
  if (wrapped <= -pi) wrapped += 2.0 * pi;
  return wrapped;
}

double amplitude(const GlobalParametrix& global) {
  const double nu = sector_nu(global);
  if (nu == 0.0) return 0.0;
  const PhaseContext& ctx = global.context();
  const double radicand = -1.0 - 2.0 * std::cos(2.0 * ctx.arg_k1);
  if (radicand < 0.0) throw DomainError("negative amplitude radicand: tau outside Sector I");
  const cplx denominator = -I1 * ctx.k1 * ctx.zstar;
  return 2.0 * std::sqrt(3.0) * std::sqrt(-nu) * std::sqrt(radicand) * ctx.k1.imag() / denominator.real();
}

double amplitude(const SpectralData& spec, const PhaseContext& ctx) { return amplitude(GlobalParametrix(spec, ctx)); }

double arg_d0_routeA(const GlobalParametrix& global, double x) {
  if (x < 2.0) throw DomainError("arg d0 needs x >= 2");
  return arg_d0_constant(global) - sector_nu(global) * std::log(x);
}

double arg_d0_routeB(const GlobalParametrix& global, const SpectralData& spec, double x) {
  if (sector_nu(global) == 0.0) return 0.0;
  return std::arg(local_scalars(global, spec, x).d0);
}

double phase_alpha(const GlobalParametrix& global, const SpectralData& spec, double x) {
  const double nu = sector_nu(global);
  if (nu == 0.0) return quiet_nan;
  const PhaseContext& ctx = global.context();
  return 3.0 * pi / 4.0 + std::arg(spec.r2_at(ctx.arg_k1)) + log_gamma(I1 * nu).imag() +
         arg_d0_routeA(global, x) + x * phase21(ctx.tau, ctx.k1).imag();
}

LeadingOrder::LeadingOrder(const SpectralData& spec, double tau, const AsymptoticOptions& options)
    : tau_(tau), options_(options) {
  if (!(tau >= 0.0) || tau > options.tau_max) throw DomainError("tau = t/x outside [0, tau_max]: not Sector I");
  if (tau == 0.0) {
    alpha_offset_ = quiet_nan;
    return;
  }
  const PhaseContext ctx = saddle_points(tau, options.tau_max);
  const GlobalParametrix global(spec, ctx);
  nu_ = sector_nu(global);
  amplitude_ = amplitude(global);
  phase_rate_ = phase21(tau, ctx.k1).imag();
  if (nu_ == 0.0) {
    alpha_offset_ = quiet_nan;
    return;
  }
  alpha_offset_ = 3.0 * pi / 4.0 + std::arg(spec.r2_at(ctx.arg_k1)) + log_gamma(I1 * nu_).imag() +
                  arg_d0_constant(global);
}

AsymptoticResult LeadingOrder::evaluate(double x) const {
  if (x < options_.x_min) throw DomainError("x below x_min");
  AsymptoticResult row;
  row.x = x;
  row.tau = tau_;
  row.t = tau_ * x;
  row.nu = nu_;
  row.A = amplitude_;
  row.error_scale = {std::pow(x, -options_.order_N), std::log(x) / x};
  if (std::isnan(alpha_offset_)) {
    row.alpha_wrapped = row.alpha_unwrapped = quiet_nan;
    row.u_leading = 0.0;
    return row;
  }
  row.alpha_unwrapped = alpha_offset_ + phase_rate_ * x - nu_ * std::log(x);
  row.alpha_wrapped = wrap_angle(row.alpha_unwrapped);
  row.u_leading = amplitude_ / std::sqrt(x) * std::cos(row.alpha_unwrapped);
  return row;
}

AsymptoticResult u_leading(const SpectralData& spec, double x, double t, const AsymptoticOptions& options) {
  if (!(x > 0.0)) throw DomainError("x must be positive");
  return LeadingOrder(spec, t / x, options).evaluate(x);
}

std::vector<AsymptoticResult> sweep(const SpectralData& spec, std::span<const double> xs, std::span<const double> taus,
                                    const AsymptoticOptions& options, int threads) {
  std::vector<AsymptoticResult> rows(xs.size() * taus.size());
  parallel_for(taus.size(), threads, [&](std::size_t j) {
    const LeadingOrder leading(spec, taus[j], options);
    for (std::size_t i = 0; i < xs.size(); ++i) rows[j * xs.size() + i] = leading.evaluate(xs[i]);
  });
  return rows;
}

void write_results_csv(std::span<const AsymptoticResult> rows, std::ostream& out) {
  out << "x,tau,t,A,alpha_wrapped,alpha_unwrapped,u_leading,xN_term,log_term\n";
  out << std::setprecision(17);
  for (const AsymptoticResult& r : rows)
    out << r.x << ',' << r.tau << ',' << r.t << ',' << r.A << ',' << r.alpha_wrapped << ',' << r.alpha_unwrapped << ','
        << r.u_leading << ',' << r.error_scale.xN_term << ',' << r.error_scale.log_term << '\n';
}

}  // namespace bsq
