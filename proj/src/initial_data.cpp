#include "boussinesq/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "boussinesq/types.hpp"

namespace bsq {

namespace {

using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;

struct ShapeValue {
  double f = 0.0;
  double df = 0.0;
};

ShapeValue shape_at(ProfileShape shape, const ProfileParams& p, double x) {
  const double xi = (x - p.center) / p.width;
  switch (shape) {
    case ProfileShape::gaussian: {
      const double g = std::exp(-xi * xi);
      return {p.amplitude * g, -2.0 * xi * p.amplitude * g / p.width};
    }
    case ProfileShape::sech2: {
      const double sech = 1.0 / std::cosh(xi);
      const double s2 = sech * sech;
      return {p.amplitude * s2, -2.0 * p.amplitude * s2 * std::tanh(xi) / p.width};
    }
  }
  return {};
}

void validate_grid(const XGrid& grid) {
  if (grid.points < 8 || !(grid.x_max > grid.x_min)) throw ConfigError("x-grid needs x_max > x_min and at least 8 points");
}

}  // namespace

double simpson(std::span<const double> values, double step) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * step * (values[0] + values[1]);
  // Simpson needs an odd sample count; the last interval gets a trapezoid.
  const std::size_t last = (n % 2 == 1) ? n - 1 : n - 2;
  double sum = values[0] + values[last];
  for (std::size_t i = 1; i < last; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * values[i];
  double total = sum * step / 3.0;
  if (last != n - 1) total += 0.5 * step * (values[n - 2] + values[n - 1]);
  return total;
}

InitialData::InitialData(const XGrid& grid, Evaluator eval, bool zero)
    : grid_(grid), eval_(std::move(eval)), zero_(zero) {
  validate_grid(grid_);
  const std::size_t n = grid_.points;
  u0_.resize(n);
  u1_.resize(n);
  u0x_.resize(n);
  v0_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const DataSample s = eval_(grid_.at(i));
    u0_[i] = s.u0;
    u1_[i] = s.u1;
    u0x_[i] = s.u0x;
    v0_[i] = s.v0;
  }
}

InitialData InitialData::zero(const XGrid& grid) {
  return InitialData(grid, [](double) { return DataSample{}; }, true);
}

InitialData InitialData::shaped(ProfileShape shape, const ProfileParams& u0, const ProfileParams& envelope,
                                const XGrid& grid) {
  if (u0.width <= 0.0 || envelope.width <= 0.0) throw ConfigError("profile width must be positive");
  auto eval = [=](double x) {
    const ShapeValue a = shape_at(shape, u0, x);
    const ShapeValue b = shape_at(shape, envelope, x);
    return DataSample{a.f, a.df, -b.df, -b.f};
  };
  return InitialData(grid, eval, u0.amplitude == 0.0 && envelope.amplitude == 0.0);
}

InitialData InitialData::from_table(std::span<const double> x, std::span<const double> u0,
                                    std::span<const double> u1) {
  const std::size_t n = x.size();
  if (n < 8 || u0.size() != n || u1.size() != n) throw ConfigError("table columns must have equal length >= 8");
  const double h = (x[n - 1] - x[0]) / static_cast<double>(n - 1);
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(x[i] - x[i - 1] - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw ConfigError("table x-column must be uniformly spaced");
  // v0 by cumulative trapezoid with an end correction, then splined like u0 and u1.
  std::vector<double> v0(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) v0[i] = v0[i - 1] + 0.5 * h * (u1[i - 1] + u1[i]);
  auto u0_spline = std::make_shared<Spline>(u0.begin(), u0.end(), x[0], h);
  auto u1_spline = std::make_shared<Spline>(u1.begin(), u1.end(), x[0], h);
  auto v0_spline = std::make_shared<Spline>(v0.begin(), v0.end(), x[0], h);
  auto eval = [=](double t) {
    return DataSample{(*u0_spline)(t), u0_spline->prime(t), (*u1_spline)(t), (*v0_spline)(t)};
  };
  const bool all_zero = std::all_of(u0.begin(), u0.end(), [](double v) { return v == 0.0; }) &&
                        std::all_of(u1.begin(), u1.end(), [](double v) { return v == 0.0; });
  return InitialData(XGrid{x[0], x[n - 1], n}, eval, all_zero);
}

DataSample InitialData::sample(double x) const {
  if (zero_ || x < grid_.x_min || x > grid_.x_max) return {};
  return eval_(x);
}

double InitialData::mass_residual() const { return std::abs(simpson(u1_, grid_.step())); }

double InitialData::endpoint_magnitude() const {
  return std::max({std::abs(u0_.front()), std::abs(u0_.back()), std::abs(u1_.front()), std::abs(u1_.back())});
}

}  // namespace bsq
