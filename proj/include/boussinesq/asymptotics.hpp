#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "boussinesq/parametrix.hpp"

namespace bsq {

// Structural size of the remainder; no constant is attached.
struct ErrorScale {
  double xN_term = 0.0;
  double log_term = 0.0;
};

struct AsymptoticResult {
  double x = 0.0;
  double tau = 0.0;
  double t = 0.0;
  double nu = 0.0;
  double A = 0.0;
  // NaN when nu = 0: the phase is undefined there and u_leading is 0.
  double alpha_wrapped = 0.0;
  double alpha_unwrapped = 0.0;
  double u_leading = 0.0;
  ErrorScale error_scale;
};

struct AsymptoticOptions {
  double tau_max = default_tau_max;
  double x_min = 10.0;
  int order_N = 2;
};

// Angle reduced to (-pi, pi].
double wrap_angle(double angle);

double amplitude(const GlobalParametrix& global);
double amplitude(const SpectralData& spec, const PhaseContext& ctx);

// Closed three-term formula: log-modulus term, -nu ln x, and an arc Stieltjes integral.
double arg_d0_routeA(const GlobalParametrix& global, double x);
// arg of d0 assembled from chi and delta values; wrapped to (-pi, pi].
double arg_d0_routeB(const GlobalParametrix& global, const SpectralData& spec, double x);

// Unwrapped phase; NaN when nu = 0.
double phase_alpha(const GlobalParametrix& global, const SpectralData& spec, double x);

// All tau-dependent pieces of the leading term, computed once per tau and
// reused read-only across an x-sweep.
class LeadingOrder {
 public:
  LeadingOrder(const SpectralData& spec, double tau, const AsymptoticOptions& options = {});

  double tau() const { return tau_; }
  double nu() const { return nu_; }
  double A() const { return amplitude_; }
  double phase_rate() const { return phase_rate_; }
  AsymptoticResult evaluate(double x) const;

 private:
  double tau_ = 0.0;
  double nu_ = 0.0;
  double amplitude_ = 0.0;
  // alpha(x) = alpha_offset_ + phase_rate_ x - nu ln x
  double alpha_offset_ = 0.0;
  double phase_rate_ = 0.0;
  AsymptoticOptions options_;
};

AsymptoticResult u_leading(const SpectralData& spec, double x, double t, const AsymptoticOptions& options = {});

// Row-major (tau outer, x inner) evaluation over a product grid.
std::vector<AsymptoticResult> sweep(const SpectralData& spec, std::span<const double> xs, std::span<const double> taus,
                                    const AsymptoticOptions& options = {}, int threads = 1);

void write_results_csv(std::span<const AsymptoticResult> rows, std::ostream& out);

}  // namespace bsq
