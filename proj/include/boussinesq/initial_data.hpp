#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

namespace bsq {

struct XGrid {
  double x_min = -30.0;
  double x_max = 30.0;
  std::size_t points = 4096;

  double step() const { return (x_max - x_min) / static_cast<double>(points - 1); }
  double at(std::size_t i) const { return x_min + step() * static_cast<double>(i); }
};

// Pointwise values entering the Lax operator: u0, its derivative, u1, and
// v0(x) = integral of u1 from -inf to x.
struct DataSample {
  double u0 = 0.0;
  double u0x = 0.0;
  double u1 = 0.0;
  double v0 = 0.0;
};

// Shape scaled as amplitude * f((x - center) / width).
struct ProfileParams {
  double amplitude = 0.0;
  double width = 1.0;
  double center = 0.0;
};

enum class ProfileShape { gaussian, sech2 };

// Immutable initial data u(x,0) = u0, u_t(x,0) = u1 on a uniform grid.
// Analytic families are evaluated exactly; tables through cubic splines.
class InitialData {
 public:
  using Evaluator = std::function<DataSample(double)>;

  static InitialData zero(const XGrid& grid = {});
  // u0 = profile, u1 = -d/dx envelope, so that u1 carries no mass.
  static InitialData shaped(ProfileShape shape, const ProfileParams& u0, const ProfileParams& envelope,
                            const XGrid& grid = {});
  // Tabulated u0, u1 on a uniform grid; u0x and v0 are derived numerically.
  static InitialData from_table(std::span<const double> x, std::span<const double> u0, std::span<const double> u1);

  // Values at x; identically zero outside the grid.
  DataSample sample(double x) const;
  const XGrid& grid() const { return grid_; }

  std::span<const double> u0() const { return u0_; }
  std::span<const double> u1() const { return u1_; }
  std::span<const double> u0x() const { return u0x_; }
  std::span<const double> v0() const { return v0_; }

  // |integral of u1| by composite Simpson on the grid.
  double mass_residual() const;
  // Largest |u0|, |u1| at the two grid ends.
  double endpoint_magnitude() const;
  bool is_zero() const { return zero_; }

 private:
  InitialData(const XGrid& grid, Evaluator eval, bool zero);

  XGrid grid_;
  Evaluator eval_;
  bool zero_ = false;
  std::vector<double> u0_, u1_, u0x_, v0_;
};

// Composite Simpson on a uniform grid (trapezoid correction for an even sample count).
double simpson(std::span<const double> values, double step);

}  // namespace bsq
