#include "boussinesq/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "boussinesq/parallel.hpp"
#include "boussinesq/phase.hpp"

namespace bsq {

namespace {

using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;

constexpr double pole_proximity = 0.05;

std::vector<double> component(std::span<const cplx> v, bool imag) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [imag](cplx z) { return imag ? z.imag() : z.real(); });
  return out;
}

// Points on the unit circle with the l_j-collision points (sixth roots of unity) avoided.
cplx circle_sample(std::size_t i, std::size_t n) {
  const double theta = 2.0 * pi * (static_cast<double>(i) + 0.5) / static_cast<double>(n) + 0.013;
  return std::polar(1.0, theta);
}

}  // namespace

struct SpectralData::Splines {
  Spline re1, im1, re2, im2;
};

std::string to_string(SpectralSource source) {
  return source == SpectralSource::computed ? "computed" : "synthetic";
}

SpectralData::SpectralData(std::vector<double> theta, std::vector<cplx> r1, std::vector<cplx> r2,
                           SpectralSource source)
    : theta_(std::move(theta)), r1_(std::move(r1)), r2_(std::move(r2)), source_(source) {
  const std::size_t n = theta_.size();
  if (n < 32) throw ConfigError("spectral arc grid needs at least 32 points");
  if (r1_.size() != n || r2_.size() != n) throw ConfigError("spectral columns must have equal length");
  spacing_ = (theta_.back() - theta_.front()) / static_cast<double>(n - 1);
  if (!(spacing_ > 0.0)) throw ConfigError("spectral theta grid must be increasing");
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(theta_[i] - theta_[i - 1] - spacing_) > 1e-9 * spacing_)
      throw ConfigError("spectral theta grid must be uniform");
  if (theta_.front() < pi / 2 - 1e-12 || theta_.back() >= 2 * pi / 3)
    throw ConfigError("spectral theta grid must lie in [pi/2, 2pi/3)");
  const auto make = [&](std::span<const cplx> v, bool imag) {
    const std::vector<double> c = component(v, imag);
    return Spline(c.begin(), c.end(), theta_.front(), spacing_);
  };
  splines_ = std::make_shared<Splines>(Splines{make(r1_, false), make(r1_, true), make(r2_, false), make(r2_, true)});
}

cplx SpectralData::r1_at(double theta) const {
  if (theta < theta_min() - 1e-12 || theta > theta_max() + 1e-12) throw DomainError("theta outside the spectral grid");
  return {splines_->re1(theta), splines_->im1(theta)};
}

cplx SpectralData::r2_at(double theta) const {
  if (theta < theta_min() - 1e-12 || theta > theta_max() + 1e-12) throw DomainError("theta outside the spectral grid");
  return {splines_->re2(theta), splines_->im2(theta)};
}

double SpectralData::conjugation_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < theta_.size(); ++i) {
    const cplx k = std::polar(1.0, theta_[i]);
    worst = std::max(worst, std::abs(r2_[i] - tilde_r(k) * std::conj(r1_[i])));
  }
  return worst;
}

double SpectralData::min_one_plus_product() const {
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < theta_.size(); ++i) lowest = std::min(lowest, (1.0 + r1_[i] * r2_[i]).real());
  return lowest;
}

cplx tilde_r(cplx k) {
  const cplx w2 = omega * omega;
  const cplx denominator = 1.0 - w2 * k * k;
  if (std::abs(denominator) < 1e-12) throw DomainError("tilde_r pole: 1 - omega^2 k^2 = 0");
  return (w2 - k * k) / denominator;
}

cplx rhat(int j, const SpectralData& spec, double theta) {
  if (j != 1 && j != 2) throw DomainError("rhat index must be 1 or 2");
  const cplx r1 = spec.r1_at(theta);
  const cplx r2 = spec.r2_at(theta);
  return (j == 1 ? r1 : r2) / (1.0 + r1 * r2);
}

std::vector<double> arc_grid(std::size_t points, double theta_end) {
  if (points < 32) throw ConfigError("arc grid needs at least 32 points");
  std::vector<double> theta(points);
  const double h = (theta_end - pi / 2) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) theta[i] = pi / 2 + h * static_cast<double>(i);
  return theta;
}

cplx BumpProfile::r1(double theta) const {
  const double offset = theta - pi / 2;
  if (offset <= 0.0) return 0.0;
  return amplitude * std::exp(-decay / offset) * std::polar(1.0, phase_offset + phase_slope * theta);
}

SpectralData synthetic_spectral(const BumpProfile& profile, std::span<const double> theta) {
  std::vector<cplx> r1(theta.size()), r2(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const cplx k = std::polar(1.0, theta[i]);
    r1[i] = profile.r1(theta[i]);
    r2[i] = tilde_r(k) * std::conj(r1[i]);
    if (!((1.0 + r1[i] * r2[i]).real() >= 1.0)) throw DomainError("synthetic profile violates 1 + r1 r2 >= 1");
  }
  return SpectralData({theta.begin(), theta.end()}, std::move(r1), std::move(r2), SpectralSource::synthetic);
}

SpectralData computed_spectral(const InitialData& data, std::span<const double> theta, int threads,
                               const JostOptions& options) {
  std::vector<cplx> r1(theta.size()), r2(theta.size());
  parallel_for(theta.size(), threads, [&](std::size_t i) {
    const cplx k = std::polar(1.0, theta[i]);
    if (std::abs(k * k - omega * omega) < pole_proximity || std::abs(k * k - omega) < pole_proximity)
      throw DomainError("arc point too close to a pole of r2");
    r1[i] = reflection_r1(data, k, options);
    r2[i] = reflection_r2(data, k, options);
  });
  return SpectralData({theta.begin(), theta.end()}, std::move(r1), std::move(r2), SpectralSource::computed);
}

void write_csv(const SpectralData& spec, std::ostream& out) {
  out << "# source=" << to_string(spec.source()) << " points=" << spec.theta().size() << std::setprecision(17)
      << " theta_min=" << spec.theta_min() << " theta_max=" << spec.theta_max() << '\n';
  out << "theta,re_r1,im_r1,re_r2,im_r2\n";
  for (std::size_t i = 0; i < spec.theta().size(); ++i) {
    out << spec.theta()[i] << ',' << spec.r1()[i].real() << ',' << spec.r1()[i].imag() << ','
        << spec.r2()[i].real() << ',' << spec.r2()[i].imag() << '\n';
  }
}

SpectralData read_csv(std::istream& in) {
  std::string line;
  SpectralSource source = SpectralSource::computed;
  std::size_t line_number = 0;
  bool header_seen = false;
  std::vector<double> theta;
  std::vector<cplx> r1, r2;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.find("source=synthetic") != std::string::npos) source = SpectralSource::synthetic;
      continue;
    }
    if (!header_seen) {
      if (line != "theta,re_r1,im_r1,re_r2,im_r2")
        throw ConfigError("line " + std::to_string(line_number) + ": expected spectral CSV header");
      header_seen = true;
      continue;
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double t, a, b, c, d;
    if (!(fields >> t >> a >> b >> c >> d))
      throw ConfigError("line " + std::to_string(line_number) + ": expected five numeric columns");
    theta.push_back(t);
    r1.emplace_back(a, b);
    r2.emplace_back(c, d);
  }
  if (!header_seen) throw ConfigError("spectral CSV has no header");
  return SpectralData(std::move(theta), std::move(r1), std::move(r2), source);
}

cplx circle_relation(const InitialData& data, cplx k, const JostOptions& options) {
  return reflection_r1(data, 1.0 / (omega * k), options) + reflection_r2(data, omega * k, options) +
         reflection_r1(data, omega * omega * k, options) * reflection_r2(data, 1.0 / k, options);
}

AssumptionReport verify_assumptions(const InitialData& data, const ReportGrid& grid) {
  AssumptionReport report;
  report.mass_residual = data.mass_residual();
  report.mass_ok = report.mass_residual < grid.mass_tol;
  report.endpoint_magnitude = data.endpoint_magnitude();
  report.decay_ok = report.endpoint_magnitude < grid.decay_tol;

  std::vector<double> s11(grid.circle_points), relation(grid.circle_points);
  parallel_for(grid.circle_points, grid.threads, [&](std::size_t i) {
    const cplx k = circle_sample(i, grid.circle_points);
    s11[i] = std::abs(scattering_matrices(data, k).first(0, 0));
    relation[i] = std::abs(circle_relation(data, k));
  });
  report.min_abs_s11 = *std::min_element(s11.begin(), s11.end());
  report.s11_ok = report.min_abs_s11 > grid.s11_floor;
  report.circle_relation = *std::max_element(relation.begin(), relation.end());
  report.circle_ok = report.circle_relation < grid.circle_tol;

  // (k - k*) s11 sampled along the circle and extrapolated linearly to eps = 0.
  auto residue = [&](double sign) {
    const cplx base = sign;
    auto g = [&](double eps) {
      const cplx k = base * std::polar(1.0, eps);
      return (k - base) * scattering_matrices(data, k).first(0, 0);
    };
    const double eps = 0.01;
    return std::abs(2.0 * g(eps / 2) - g(eps));
  };
  report.residue_plus = residue(1.0);
  report.residue_minus = residue(-1.0);
  report.residues_ok = report.residue_plus > grid.residue_floor && report.residue_minus > grid.residue_floor;

  double worst = 0.0;
  for (std::size_t i = 0; i < grid.axis_points; ++i) {
    const double t = 0.3 + 0.65 * static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(grid.axis_points - 1, 1));
    worst = std::max(worst, std::abs(reflection_r1(data, I1 * t)));
  }
  report.max_r1_imag_axis = worst;
  return report;
}

}  // namespace bsq
