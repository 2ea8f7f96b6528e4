#include "boussinesq/special.hpp"

#include <array>
#include <cmath>

extern "C" {
#include <quadmath.h>
}

namespace bsq {

namespace {

using quad = __float128;
using cquad = __complex128;

cquad make(quad re, quad im) {
  cquad z;
  __real__ z = re;
  __imag__ z = im;
  return z;
}

cquad to_quad(cplx z) { return make(z.real(), z.imag()); }
cplx to_double(cquad z) {
  return {static_cast<double>(__real__ z), static_cast<double>(__imag__ z)};
}

constexpr int stirling_terms = 20;
constexpr quad stirling_shift = 20;

// B_2, B_4, ..., B_40 from the binomial recurrence, carried in quad precision.
const std::array<quad, stirling_terms>& bernoulli_even() {
  static const std::array<quad, stirling_terms> table = [] {
    constexpr int n_max = 2 * stirling_terms;
    std::array<quad, n_max + 1> b{};
    b[0] = 1;
    for (int n = 1; n <= n_max; ++n) {
      quad sum = 0;
      quad binom = 1;  // C(n+1, k)
      for (int k = 0; k < n; ++k) {
        sum += binom * b[k];
        binom = binom * (n + 1 - k) / (k + 1);
      }
      b[n] = -sum / (n + 1);
    }
    std::array<quad, stirling_terms> even{};
    for (int k = 1; k <= stirling_terms; ++k) even[k - 1] = b[2 * k];
    return even;
  }();
  return table;
}

cquad log_gamma_q(cquad z) {
  if (__real__ z <= 0 && __imag__ z == 0 && floorq(__real__ z) == __real__ z)
    throw DomainError("log_gamma pole at a non-positive integer");
  cquad shift_log = 0;
  cquad w = z;
  while (__real__ w < stirling_shift) {
    shift_log += clogq(w);
    w += 1;
  }
  const quad half_log_2pi = 0.5Q * logq(2 * M_PIq);
  cquad result = (w - 0.5Q) * clogq(w) - w + half_log_2pi;
  const cquad inv = 1 / w;
  const cquad inv2 = inv * inv;
  cquad power = inv;
  const auto& bern = bernoulli_even();
  for (int k = 1; k <= stirling_terms; ++k) {
    result += bern[k - 1] / (quad(2 * k) * quad(2 * k - 1)) * power;
    power *= inv2;
  }
  return result - shift_log;
}

cquad rgamma_q(cquad z) {
  // 1/Gamma is entire; its zeros sit at the non-positive integers.
  if (__imag__ z == 0 && __real__ z <= 0 && floorq(__real__ z) == __real__ z) return 0;
  return cexpq(-log_gamma_q(z));
}

// Confluent hypergeometric M(a, b, x) by direct summation; callers keep Re x >= 0.
cquad kummer_series(cquad a, quad b, cquad x) {
  cquad term = 1;
  cquad sum = 1;
  for (int n = 0; n < 2000; ++n) {
    term *= (a + n) / (b + n) * x / (n + 1);
    sum += term;
    if (cabsq(term) < 1e-36Q * cabsq(sum) && n > 4) return sum;
  }
  throw ConvergenceError("Kummer series did not converge");
}

cquad kummer_m(cquad a, quad b, cquad x) {
  if (__real__ x >= 0) return kummer_series(a, b, x);
  return cexpq(x) * kummer_series(b - a, b, -x);
}

cquad pcf_scaled_small(cquad a, cquad zeta) {
  const cquad x = zeta * zeta / 2;
  const cquad first = kummer_m(-a / 2, 0.5Q, x) * rgamma_q((1 - a) / 2);
  const cquad second = sqrtq(2.0Q) * zeta * kummer_m((1 - a) / 2, 1.5Q, x) * rgamma_q(-a / 2);
  return cpowq(make(2, 0), a / 2) * sqrtq(M_PIq) * (first - second);
}

cplx pcf_scaled_large(cplx a, cplx zeta) {
  const cplx inv2 = 1.0 / (zeta * zeta);
  cplx term = 1.0;
  cplx sum = 1.0;
  double last = 1.0;
  for (int n = 1; n < 200; ++n) {
    term *= -(a - double(2 * n - 2)) * (a - double(2 * n - 1)) / (2.0 * n) * inv2;
    const double size = std::abs(term);
    if (size > last) break;  // asymptotic series: stop at the smallest term
    sum += term;
    last = size;
    if (size < 1e-18 * std::abs(sum)) break;
  }
  return std::pow(zeta, a) * sum;
}

}  // namespace

cplx log_gamma(cplx z) { return to_double(log_gamma_q(to_quad(z))); }

cplx pcf_scaled(cplx a, cplx zeta) {
  if (std::abs(std::arg(zeta)) >= 0.75 * pi && std::abs(zeta) > 0.0)
    throw DomainError("pcf_scaled needs |arg zeta| < 3pi/4");
  if (std::abs(zeta) >= 8.0) return pcf_scaled_large(a, zeta);
  return to_double(pcf_scaled_small(to_quad(a), to_quad(zeta)));
}

}  // namespace bsq
