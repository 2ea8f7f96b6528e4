#include "boussinesq/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>

#include "boussinesq/fft.hpp"
#include "boussinesq/phase.hpp"

namespace bsq {

namespace {

constexpr double negligible_share = 1e-18;

// Horner evaluation of sum c_j t^j.
cplx horner(const std::vector<cplx>& coefficients, cplx t) {
  cplx value = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) value = value * t + *it;
  return value;
}

std::vector<cplx> truncated_product(const std::vector<cplx>& a, const std::vector<cplx>& b, std::size_t count) {
  std::vector<cplx> product(count, 0.0);
  for (std::size_t i = 0; i < std::min(a.size(), count); ++i)
    for (std::size_t j = 0; i + j < count && j < b.size(); ++j) product[i + j] += a[i] * b[j];
  return product;
}

// Coefficients of (c + t)^power in t for integer power (negative allowed), truncated.
std::vector<cplx> binomial_series(cplx c, int power, std::size_t count) {
  std::vector<cplx> series(count, 0.0);
  cplx term = std::pow(c, power);
  for (std::size_t l = 0; l < count; ++l) {
    if (power >= 0 && static_cast<int>(l) > power) break;
    series[l] = term;
    term *= static_cast<double>(power - static_cast<int>(l)) / static_cast<double>(l + 1) / c;
  }
  return series;
}

// Fornberg weights for the derivatives 0..max_order at z from the given nodes.
Eigen::MatrixXd fornberg_weights(double z, const std::vector<double>& nodes, int max_order) {
  const int n = static_cast<int>(nodes.size());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, max_order + 1);
  double c1 = 1.0, c4 = nodes[0] - z;
  c(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, max_order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
        c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
      }
      for (int k = mn; k >= 1; --k) c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
      c(j, 0) = c4 * c(j, 0) / c3;
    }
    c1 = c2;
  }
  return c;
}

// Relative change of the Sobolev norm when the upper half of the band is dropped.
// rounding_scale bounds the magnitude of the terms whose difference forms the samples;
// white rounding noise at that scale would otherwise dominate the top of the band.
double band_change(const FourierSplit& split, int order, double rounding_scale) {
  const double n = static_cast<double>(split.size());
  const double floor =
      10.0 * split.p_step() / (2.0 * pi) * std::sqrt(n) * std::numeric_limits<double>::epsilon() * rounding_scale;
  const double full = split.sobolev_norm(order, 0.0, floor);
  if (full == 0.0) return 0.0;
  const double band = 0.5 * std::abs(split.s(split.size() / 2));
  return std::abs(full - split.sobolev_norm(order, band, floor)) / full;
}

}  // namespace

std::vector<cplx> taylor_coefficients(const std::function<cplx(cplx)>& f, cplx centre, double radius,
                                      std::size_t count, std::size_t nodes) {
  if (!(radius > 0.0) || nodes < count) throw DomainError("Taylor coefficients need radius > 0 and nodes >= count");
  std::vector<cplx> samples(nodes);
  for (std::size_t j = 0; j < nodes; ++j) samples[j] = f(centre + std::polar(radius, 2.0 * pi * j / nodes));
  fft_inplace(samples, FftDirection::forward);
  std::vector<cplx> coefficients(count);
  for (std::size_t j = 0; j < count; ++j)
    coefficients[j] = samples[j] / (static_cast<double>(nodes) * std::pow(radius, static_cast<double>(j)));
  return coefficients;
}

FourierSplit::FourierSplit(double p_start, double p_step, std::vector<cplx> values)
    : p_start_(p_start), p_step_(p_step), values_(std::move(values)) {
  const std::size_t n = values_.size();
  if (n < 2 || !(p_step > 0.0)) throw DomainError("Fourier split needs at least two samples and a positive step");
  s_step_ = 2.0 * pi / (static_cast<double>(n) * p_step);
  spectrum_ = values_;
  fft_inplace(spectrum_, FftDirection::forward);
  for (std::size_t m = 0; m < n; ++m) spectrum_[m] *= p_step / (2.0 * pi) * std::exp(-I1 * (p_start * s(m)));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s(a) < s(b); });
  const double total = l1_norm();
  double skipped = 0.0;
  s_floor_ = s(order.front());
  for (std::size_t m : order) {
    skipped += std::abs(spectrum_[m]) * s_step_;
    if (skipped > negligible_share * total || s(m) >= 0.0) break;
    s_floor_ = s(m);
  }
}

double FourierSplit::s(std::size_t m) const {
  const std::size_t n = values_.size();
  const double index = m < (n + 1) / 2 ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(n);
  return index * s_step_;
}

std::vector<cplx> FourierSplit::tail(double cut) const {
  const std::size_t n = values_.size();
  std::vector<cplx> modes(n, 0.0);
  for (std::size_t m = 0; m < n; ++m)
    if (s(m) > cut) modes[m] = spectrum_[m] * (2.0 * pi / p_step_) * std::exp(I1 * (p_start_ * s(m)));
  fft_inplace(modes, FftDirection::backward);
  for (cplx& value : modes) value /= static_cast<double>(n);
  return modes;
}

cplx FourierSplit::head(double cut, cplx phase) const {
  if (phase.real() < -1e-12 * std::max(1.0, std::abs(phase)))
    throw DomainError("analytic part needs Re phase >= 0");
  cplx sum = 0.0;
  for (std::size_t m = 0; m < values_.size(); ++m) {
    const double sm = s(m);
    if (sm > cut || sm < s_floor_) continue;
    sum += spectrum_[m] * std::exp(sm * phase);
  }
  return sum * s_step_;
}

double FourierSplit::sobolev_norm(int order, double band, double floor) const {
  double sum = 0.0;
  for (std::size_t m = 0; m < values_.size(); ++m) {
    const double sm = std::abs(s(m));
    if ((band > 0.0 && sm > band) || std::abs(spectrum_[m]) <= floor) continue;
    sum += std::pow(sm, 2.0 * order) * std::norm(spectrum_[m]);
  }
  return std::sqrt(sum * s_step_);
}

double FourierSplit::l1_norm() const {
  double sum = 0.0;
  for (const cplx& value : spectrum_) sum += std::abs(value);
  return sum * s_step_;
}

// ---------------------------------------------------------------------------
// Ray variant.

namespace {

constexpr double series_radius = 0.25;  // f1 from its Taylor series inside this distance of k*
constexpr std::size_t series_extra = 48;

// Point of the ray (-i inf, -i] with phi(k) = p, p <= -1.
cplx ray_point(double p) { return cplx(0.0, -(-p + std::sqrt(p * p - 1.0))); }

}  // namespace

RayDecomposition::RayDecomposition(Function r1, const DecompositionOptions& options)
    : r1_(std::move(r1)), options_(options), split_(0.0, 1.0, std::vector<cplx>(2)) {
  if (options.order_N < 1) throw DomainError("decomposition needs N >= 1");
  if (options.M != 0 && options.M < options.order_N + 1) throw DomainError("decomposition needs M >= N+1");
  if (std::abs(options.pole - anchor()) <= options.taylor_radius)
    throw DomainError("rational anchor pole inside the Taylor disk");
  const int first = options.M != 0 ? options.M : options.order_N + 1;
  const int last = options.M != 0 ? options.M : first + options.max_M_increase;
  for (int M = first; M <= last; ++M) {
    build(M);
    if (diagnostics_.sobolev_band_change <= options.sobolev_tolerance) return;
  }
  diagnostics_.warnings.push_back("F is not numerically in H^{N+1}: Sobolev norm still depends on the band at M = " +
                                  std::to_string(diagnostics_.M));
}

void RayDecomposition::build(int M) {
  const std::size_t matched = 4 * static_cast<std::size_t>(M);
  const std::size_t series_count = matched + series_extra;
  const int degree = 8 * M - 1;
  const cplx offset = anchor() - options_.pole;

  const std::vector<cplx> r1_series = taylor_coefficients(r1_, anchor(), options_.taylor_radius, series_count);
  const std::vector<cplx> r1_head(r1_series.begin(), r1_series.begin() + static_cast<std::ptrdiff_t>(matched));
  numerator_ = truncated_product(r1_head, binomial_series(offset, degree, matched), matched);

  // Taylor series of f1 = r1 - f0 at k*; the first 4M coefficients vanish by construction.
  const std::vector<cplx> f0_series =
      truncated_product(numerator_, binomial_series(offset, -degree, series_count), series_count);
  std::vector<cplx> f1_shifted(series_count - matched);
  for (std::size_t j = matched; j < series_count; ++j) f1_shifted[j - matched] = r1_series[j] - f0_series[j];

  diagnostics_ = {};
  diagnostics_.M = M;
  const std::size_t n = options_.fft_size;
  const double step = 2.0 * options_.half_width / static_cast<double>(n);
  std::vector<cplx> values(n, 0.0);
  double rounding_scale = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double p = -options_.half_width + step * static_cast<double>(j);
    if (p >= -1.0) break;
    const cplx k = ray_point(p);
    const cplx t = k - anchor();
    const cplx k_power = std::pow(k, 2 * M);
    if (std::abs(t) < series_radius) {
      values[j] = k_power * std::pow(t, static_cast<int>(matched) - M) * horner(f1_shifted, t);
      rounding_scale = std::max(rounding_scale, std::abs(values[j]));
    } else {
      const cplx r1_value = r1_(k), f0_value = f0(k);
      values[j] = k_power / std::pow(t, M) * (r1_value - f0_value);
      rounding_scale =
          std::max(rounding_scale, std::abs(k_power / std::pow(t, M)) * std::max(std::abs(r1_value), std::abs(f0_value)));
    }
  }
  split_ = FourierSplit(-options_.half_width, step, std::move(values));
  diagnostics_.sobolev_norm = split_.sobolev_norm(options_.order_N + 1);
  diagnostics_.sobolev_band_change = band_change(split_, options_.order_N + 1, rounding_scale);
  diagnostics_.fhat_l1 = split_.l1_norm();
}

cplx RayDecomposition::f0(cplx k) const {
  const int degree = 8 * M() - 1;
  return horner(numerator_, k - anchor()) / std::pow(k - options_.pole, degree);
}

cplx RayDecomposition::weight(cplx k) const { return std::pow(k - anchor(), M()) / std::pow(k, 2 * M()); }

cplx RayDecomposition::fa(double x, cplx k) const {
  const double arg = std::arg(k);
  if (std::abs(k) < 1.0 - 1e-12 || arg < -pi / 2 - 1e-12 || arg > -pi / 3 + 1e-12)
    throw DomainError("analytic part is defined on arg k in [-pi/2, -pi/3], |k| >= 1");
  return weight(k) * split_.head(x / 4.0, phase21(0.0, k));
}

RayDecomposition::RaySamples RayDecomposition::remainder(double x) const {
  const std::vector<cplx> tail = split_.tail(x / 4.0);
  RaySamples samples;
  for (std::size_t j = 0; j < split_.size(); ++j) {
    const double p = split_.p(j);
    if (p > -1.0) break;
    const cplx k = ray_point(p);
    samples.k.push_back(k);
    samples.value.push_back(weight(k) * tail[j]);
  }
  return samples;
}

RemainderNorms RayDecomposition::remainder_norms(double x) const {
  const RaySamples samples = remainder(x);
  RemainderNorms norms{x, 0.0, 0.0};
  for (std::size_t j = 0; j < samples.k.size(); ++j) {
    norms.linf = std::max(norms.linf, std::abs(samples.value[j]));
    if (j + 1 < samples.k.size())
      norms.l1 += 0.5 * (std::abs(samples.value[j]) + std::abs(samples.value[j + 1])) *
                  std::abs(samples.k[j + 1] - samples.k[j]);
  }
  return norms;
}

// ---------------------------------------------------------------------------
// Arc variant.

ArcDecomposition::ArcDecomposition(Function r, double theta_a, double theta_b, double tau,
                                   const DecompositionOptions& options)
    : r_(std::move(r)), theta_a_(theta_a), theta_b_(theta_b), tau_(tau), options_(options),
      split_(0.0, 1.0, std::vector<cplx>(2)) {
  if (!(theta_b > theta_a)) throw DomainError("arc needs theta_a < theta_b");
  if (options.order_N < 1) throw DomainError("decomposition needs N >= 1");
  constexpr int checks = 512;
  const auto slope = [&](double theta) { return std::cos(theta) - tau * std::cos(2.0 * theta); };
  const double first_slope = slope(theta_a);
  for (int i = 0; i <= checks; ++i) {
    const double theta = theta_a + (theta_b - theta_a) * i / checks;
    if (slope(theta) * first_slope <= 0.0) throw DomainError("phase is not strictly monotone on the arc");
  }

  // Endpoint theta-derivatives from one-sided stencils inside the arc.
  const int matched = options.order_N + 1;
  const int stencil = matched + 7;
  const double h = std::min((theta_b - theta_a) / (2.0 * stencil), 0.025);
  const int unknowns = 2 * (matched + 1);
  Eigen::MatrixXcd system(unknowns, unknowns);
  Eigen::VectorXcd rhs(unknowns);
  int row = 0;
  for (const double end : {theta_a, theta_b}) {
    const double direction = end == theta_a ? 1.0 : -1.0;
    std::vector<double> nodes(stencil);
    Eigen::VectorXcd samples(stencil);
    for (int i = 0; i < stencil; ++i) {
      nodes[i] = end + direction * h * i;
      samples[i] = r_(nodes[i]);
    }
    const Eigen::MatrixXd weights = fornberg_weights(end, nodes, matched);
    for (int order = 0; order <= matched; ++order, ++row) {
      rhs[row] = weights.col(order).cast<cplx>().dot(samples);
      for (int power = 0; power < unknowns; ++power)
        system(row, power) = std::pow(I1 * static_cast<double>(power), order) * std::polar(1.0, power * end);
    }
  }
  const Eigen::VectorXcd coefficients = system.fullPivLu().solve(rhs);
  poly_.assign(coefficients.data(), coefficients.data() + unknowns);

  const double psi_a = psi(theta_a), psi_b = psi(theta_b);
  const double low = std::min(psi_a, psi_b), high = std::max(psi_a, psi_b);
  const double half_width = 0.5 * options.half_width * (high - low);
  const double centre = 0.5 * (low + high);
  const std::size_t n = options.fft_size;
  const double step = 2.0 * half_width / static_cast<double>(n);
  std::vector<cplx> values(n, 0.0);
  double rounding_scale = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double p = centre - half_width + step * static_cast<double>(j);
    if (p <= low || p >= high) continue;
    const double theta = theta_of_psi(p);
    const cplx r_value = r_(theta), f0_value = f0(std::polar(1.0, theta));
    values[j] = r_value - f0_value;
    rounding_scale = std::max({rounding_scale, std::abs(r_value), std::abs(f0_value)});
  }
  split_ = FourierSplit(centre - half_width, step, std::move(values));
  diagnostics_.M = matched;
  diagnostics_.sobolev_norm = split_.sobolev_norm(options.order_N + 1);
  diagnostics_.sobolev_band_change = band_change(split_, options.order_N + 1, rounding_scale);
  diagnostics_.fhat_l1 = split_.l1_norm();
  if (diagnostics_.sobolev_band_change > options.sobolev_tolerance)
    diagnostics_.warnings.push_back("F is not numerically in H^{N+1} on the arc");
}

double ArcDecomposition::psi(double theta) const { return (1.0 - tau_ * std::cos(theta)) * std::sin(theta); }

double ArcDecomposition::theta_of_psi(double value) const {
  std::uintmax_t iterations = 200;
  const auto [lo, hi] = boost::math::tools::toms748_solve(
      [&](double theta) { return psi(theta) - value; }, theta_a_, theta_b_,
      boost::math::tools::eps_tolerance<double>(52), iterations);
  return 0.5 * (lo + hi);
}

cplx ArcDecomposition::f0(cplx k) const { return horner(poly_, k); }

cplx ArcDecomposition::analytic(double x, cplx k) const { return f0(k) + split_.head(x / 4.0, phase21(tau_, k)); }

ArcDecomposition::ArcSamples ArcDecomposition::remainder(double x) const {
  const std::vector<cplx> tail = split_.tail(x / 4.0);
  const double low = std::min(psi(theta_a_), psi(theta_b_)), high = std::max(psi(theta_a_), psi(theta_b_));
  ArcSamples samples;
  for (std::size_t j = 0; j < split_.size(); ++j) {
    const double p = split_.p(j);
    if (p <= low || p >= high) continue;
    samples.theta.push_back(theta_of_psi(p));
    samples.value.push_back(tail[j]);
  }
  return samples;
}

RemainderNorms ArcDecomposition::remainder_norms(double x) const {
  const ArcSamples samples = remainder(x);
  RemainderNorms norms{x, 0.0, 0.0};
  for (std::size_t j = 0; j < samples.theta.size(); ++j) {
    norms.linf = std::max(norms.linf, std::abs(samples.value[j]));
    if (j + 1 < samples.theta.size())
      norms.l1 += 0.5 * (std::abs(samples.value[j]) + std::abs(samples.value[j + 1])) *
                  std::abs(samples.theta[j + 1] - samples.theta[j]);
  }
  return norms;
}

}  // namespace bsq
