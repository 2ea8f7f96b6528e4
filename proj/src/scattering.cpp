#include "boussinesq/scattering.hpp"

#include <array>
#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "boussinesq/phase.hpp"

namespace bsq {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<cplx, 9>;
using Vec3 = Eigen::Vector3cd;

constexpr double collision_guard = 1e-6;

Vec3 lambdas(cplx k) { return {lambda(1, k), lambda(2, k), lambda(3, k)}; }

void require_regular(cplx k) {
  if (k == cplx{0.0, 0.0}) throw DomainError("k = 0 is excluded");
  const Vec3 l = lambdas(k);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (std::abs(l(i) - l(j)) < collision_guard)
        throw DomainError("P(k) is singular: two eigenvalues l_j collide at this k");
}

Mat3 to_mat(const State& y) {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = y[3 * i + j];
  return m;
}

State identity_state() {
  State y{};
  y[0] = y[4] = y[8] = 1.0;
  return y;
}

// U has rank one: U = P^{-1} e3 (m31, m32, 0) P, so U_ij = col_i * (m31 + m32 l_j).
struct LaxFactors {
  Vec3 l;
  Vec3 col;
};

LaxFactors lax_factors(cplx k) {
  require_regular(k);
  const Mat3 p = lax_P(k);
  return {lambdas(k), p.inverse().col(2)};
}

Mat3 conjugated_generator(const InitialData& data, const LaxFactors& f, double x, bool adjoint) {
  const DataSample d = data.sample(x);
  const cplx m31 = -d.u0x / 4.0 - I1 * d.v0 / (4.0 * std::sqrt(3.0));
  const cplx m32 = -d.u0 / 2.0;
  Mat3 u;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) u(i, j) = f.col(i) * (m31 + m32 * f.l(j));
  Mat3 out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (!adjoint)
        out(i, j) = u(i, j) * std::exp(-x * (f.l(i) - f.l(j)));
      else
        out(i, j) = -u(j, i) * std::exp(x * (f.l(i) - f.l(j)));
    }
  return out;
}

struct ConjugatedSystem {
  const InitialData& data;
  LaxFactors factors;
  bool adjoint;

  void operator()(const State& y, State& dydx, double x) const {
    const Mat3 g = conjugated_generator(data, factors, x, adjoint);
    const Mat3 m = to_mat(y);
    const Mat3 out = g * m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) dydx[3 * i + j] = out(i, j);
  }
};

// Integrates from x_max down to x_min; when `grid_values` is non-null the
// solution is recorded at every grid node (descending order).
Mat3 integrate(const InitialData& data, cplx k, bool adjoint, const JostOptions& options,
               std::vector<Mat3>* grid_values) {
  const ConjugatedSystem system{data, lax_factors(k), adjoint};
  State y = identity_state();
  const XGrid& grid = data.grid();
  if (data.is_zero()) {
    if (grid_values) grid_values->assign(grid.points, Mat3::Identity());
    return Mat3::Identity();
  }
  auto stepper = odeint::make_dense_output(options.abs_tol, options.rel_tol, odeint::runge_kutta_dopri5<State>());
  const double dx0 = -grid.step();
  if (grid_values) {
    std::vector<double> nodes(grid.points);
    for (std::size_t i = 0; i < grid.points; ++i) nodes[i] = grid.at(grid.points - 1 - i);
    grid_values->clear();
    grid_values->reserve(grid.points);
    odeint::integrate_times(stepper, std::ref(system), y, nodes.begin(), nodes.end(), dx0,
                            [&](const State& s, double) { grid_values->push_back(to_mat(s)); });
  } else {
    odeint::integrate_adaptive(stepper, std::ref(system), y, grid.x_max, grid.x_min, dx0);
  }
  return to_mat(y);
}

Mat3 unconjugate(const Mat3& y, const Vec3& l, double x) {
  Mat3 out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out(i, j) = y(i, j) * std::exp(x * (l(i) - l(j)));
  return out;
}

}  // namespace

Mat3 lax_P(cplx k) {
  const Vec3 l = lambdas(k);
  Mat3 p;
  for (int j = 0; j < 3; ++j) {
    p(0, j) = 1.0;
    p(1, j) = l(j);
    p(2, j) = l(j) * l(j);
  }
  return p;
}

Mat3 lax_U(const InitialData& data, double x, cplx k) {
  require_regular(k);
  const DataSample d = data.sample(x);
  Mat3 inner = Mat3::Zero();
  inner(2, 0) = -d.u0x / 4.0 - I1 * d.v0 / (4.0 * std::sqrt(3.0));
  inner(2, 1) = -d.u0 / 2.0;
  const Mat3 p = lax_P(k);
  return p.inverse() * inner * p;
}

ScatteringState solve_jost(const InitialData& data, cplx k, const JostOptions& options) {
  ScatteringState state;
  state.k = k;
  if (std::abs(std::abs(k) - 1.0) > 1e-12)
    state.warnings.emplace_back("k off the unit circle: conjugating exponentials grow and accuracy may degrade");
  state.s = integrate(data, k, false, options, nullptr);
  state.sA = integrate(data, k, true, options, nullptr);
  // Y(x_min) is s restricted to the grid; undo the conjugation at the left end.
  state.X = unconjugate(state.s, lambdas(k), data.grid().x_min);
  return state;
}

double volterra_residual(const InitialData& data, cplx k, const JostOptions& options) {
  std::vector<Mat3> values;
  integrate(data, k, false, options, &values);
  const LaxFactors f = lax_factors(k);
  const XGrid& grid = data.grid();
  const double h = grid.step();
  // values[m] sits at grid node n-1-m; integrand F = G Y.
  const std::size_t n = values.size();
  std::vector<Mat3> integrand(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double x = grid.at(n - 1 - m);
    integrand[m] = conjugated_generator(data, f, x, false) * values[m];
  }
  // Cumulative Simpson from the right end over pairs of intervals; X and Y
  // differ by a unimodular conjugation on the circle, so the residual of Y is
  // the residual of the Volterra equation for X.
  double worst = 0.0;
  Mat3 accumulated = Mat3::Zero();
  for (std::size_t m = 2; m < n; m += 2) {
    accumulated += (h / 3.0) * (integrand[m - 2] + 4.0 * integrand[m - 1] + integrand[m]);
    const Mat3 residual = values[m] - (Mat3::Identity() - accumulated);
    const double x = grid.at(n - 1 - m);
    const Mat3 scaled = unconjugate(residual, f.l, x);
    worst = std::max(worst, max_abs(scaled));
  }
  return worst;
}

double jost_det_defect(const InitialData& data, cplx k, const JostOptions& options) {
  std::vector<Mat3> values;
  integrate(data, k, false, options, &values);
  double worst = 0.0;
  for (const Mat3& y : values) worst = std::max(worst, std::abs(y.determinant() - 1.0));
  return worst;
}

std::pair<Mat3, Mat3> scattering_matrices(const InitialData& data, cplx k, const JostOptions& options) {
  const ScatteringState state = solve_jost(data, k, options);
  return {state.s, state.sA};
}

cplx reflection_r1(const InitialData& data, cplx k, const JostOptions& options) {
  const Mat3 s = integrate(data, k, false, options, nullptr);
  return s(0, 1) / s(0, 0);
}

cplx reflection_r2(const InitialData& data, cplx k, const JostOptions& options) {
  const Mat3 sa = integrate(data, k, true, options, nullptr);
  return sa(0, 1) / sa(0, 0);
}

cplx reflection_limit(int j, const InitialData& data, double sign, const JostOptions& options) {
  if (j != 1 && j != 2) throw DomainError("reflection index must be 1 or 2");
  auto r = [&](cplx k) { return j == 1 ? reflection_r1(data, k, options) : reflection_r2(data, k, options); };
  const cplx base = sign >= 0.0 ? 1.0 : -1.0;
  // Symmetric offsets cancel the odd part of the one-sided error; three
  // Richardson levels remove the eps^2, eps^4 and eps^6 terms. The offsets are
  // small because the even error carries a large coefficient near k = -1.
  auto sym = [&](double eps) { return 0.5 * (r(base * std::polar(1.0, eps)) + r(base * std::polar(1.0, -eps))); };
  std::array<cplx, 4> level;
  for (std::size_t i = 0; i < level.size(); ++i) level[i] = sym(0.004 / double(1 << i));
  double factor = 4.0;
  for (std::size_t depth = 1; depth < level.size(); ++depth, factor *= 4.0)
    for (std::size_t i = 0; i + depth < level.size(); ++i) level[i] = (factor * level[i + 1] - level[i]) / (factor - 1.0);
  return level[0];
}

}  // namespace bsq
