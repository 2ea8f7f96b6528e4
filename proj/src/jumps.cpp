#include "boussinesq/jumps.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <utility>

#include "boussinesq/parallel.hpp"

namespace bsq {

namespace {

constexpr std::array all_segments = {
    Segment::v1p,   Segment::v1pp,  Segment::v2p,   Segment::v2pp,  Segment::v3p,   Segment::v3pp,  Segment::v4p,
    Segment::v4pp,  Segment::v5p,   Segment::v5pp,  Segment::v6p,   Segment::v6pp,  Segment::v7,    Segment::v8,
    Segment::v9,    Segment::v1a_1, Segment::v1r_1, Segment::v4a_1, Segment::v4r_1, Segment::v1_2,  Segment::v2_2,
    Segment::v3_2,  Segment::v4_2,  Segment::v5_2,  Segment::v6_2,  Segment::v7_2,  Segment::v8_2,  Segment::v9_2,
    Segment::v1s_2, Segment::v4_3,  Segment::v4u_3, Segment::v6_3,  Segment::v6d_3, Segment::v7_3,  Segment::v7u_3,
    Segment::v9_3,  Segment::v9d_3,
};

// Exponentials e^{theta_21}, e^{theta_31}, e^{theta_32} at one (x, t, k).
struct Exponentials {
  cplx e21, e31, e32;
};

Exponentials exponentials(double x, double t, cplx k) {
  if (!(x > 0.0)) throw DomainError("jump matrices need x > 0");
  const double tau = t / x;
  return {std::exp(x * phase(PhasePair::p21, tau, k)), std::exp(x * phase(PhasePair::p31, tau, k)),
          std::exp(x * phase(PhasePair::p32, tau, k))};
}

// Remainder combinations entering the middle factors of the second transformation.
struct SplitTerms {
  const ReflectionSampler& r;

  cplx h1(cplx k) const { return r.r1_r(k) + r.r1_a(1.0 / (omega * omega * k)) * r.r2_r(omega * k); }
  cplx h2(cplx k) const { return r.r2_r(k) + r.r2_a(1.0 / (omega * omega * k)) * r.r1_r(omega * k); }
  cplx g1(cplx k) const { return r.r1_r(1.0 / (omega * omega * k)) - r.r1_r(omega * k) * h1(k); }
  cplx g2(cplx k) const { return r.r2_r(1.0 / (omega * omega * k)) - r.r2_r(omega * k) * h2(k); }
  cplx g(cplx k) const {
    const cplx inner = r.r1_r(omega * k) * r.r2_a(1.0 / (omega * omega * k)) + r.r2_r(k);
    return r.r1_r(k) * inner + r.r1_a(1.0 / (omega * omega * k)) * r.r2_r(omega * k) * inner +
           r.r1_r(1.0 / (omega * omega * k)) * r.r2_r(1.0 / (omega * omega * k));
  }
};

Mat3 matrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  Mat3 m;
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (const cplx& value : row) m(i, j++) = value;
    ++i;
  }
  return m;
}

Mat3 jump_value(const ReflectionSampler& r, double x, double t, cplx k, Segment segment) {
  const auto [e21, e31, e32] = exponentials(x, t, k);
  const cplx w = omega, w2 = omega * omega;
  Mat3 v = Mat3::Identity();
  switch (segment) {
    case Segment::v1p: v(0, 1) = -r.r1(k) / e21; break;
    case Segment::v1pp: v(1, 0) = r.r1(1.0 / k) * e21; break;
    case Segment::v2p: v(1, 2) = -r.r2(1.0 / (w * k)) / e32; break;
    case Segment::v2pp: v(2, 1) = r.r2(w * k) * e32; break;
    case Segment::v3p: v(2, 0) = -r.r1(w2 * k) * e31; break;
    case Segment::v3pp: v(0, 2) = r.r1(1.0 / (w2 * k)) / e31; break;
    case Segment::v4p: v(0, 1) = -r.r2(1.0 / k) / e21; break;
    case Segment::v4pp: v(1, 0) = r.r2(k) * e21; break;
    case Segment::v5p: v(1, 2) = -r.r1(w * k) / e32; break;
    case Segment::v5pp: v(2, 1) = r.r1(1.0 / (w * k)) * e32; break;
    case Segment::v6p: v(2, 0) = -r.r2(1.0 / (w2 * k)) * e31; break;
    case Segment::v6pp: v(0, 2) = r.r2(w2 * k) / e31; break;
    case Segment::v7:
      v = matrix({{1.0, -r.r1(k) / e21, r.r2(w2 * k) / e31},
                  {-r.r2(k) * e21, 1.0 + r.r1(k) * r.r2(k), (r.r2(1.0 / (w * k)) - r.r2(k) * r.r2(w2 * k)) / e32},
                  {r.r1(w2 * k) * e31, (r.r1(1.0 / (w * k)) - r.r1(k) * r.r1(w2 * k)) * e32, f_circle(r, w2 * k)}});
      break;
    case Segment::v8:
      v = matrix({{f_circle(r, k), r.r1(k) / e21, (r.r1(1.0 / (w2 * k)) - r.r1(k) * r.r1(w * k)) / e31},
                  {r.r2(k) * e21, 1.0, -r.r1(w * k) / e32},
                  {(r.r2(1.0 / (w2 * k)) - r.r2(w * k) * r.r2(k)) * e31, -r.r2(w * k) * e32,
                   1.0 + r.r1(w * k) * r.r2(w * k)}});
      break;
    case Segment::v9:
      v = matrix({{1.0 + r.r1(w2 * k) * r.r2(w2 * k), (r.r2(1.0 / k) - r.r2(w * k) * r.r2(w2 * k)) / e21,
                   -r.r2(w2 * k) / e31},
                  {(r.r1(1.0 / k) - r.r1(w * k) * r.r1(w2 * k)) * e21, f_circle(r, w * k), r.r1(w * k) / e32},
                  {-r.r1(w2 * k) * e31, r.r2(w * k) * e32, 1.0}});
      break;
    case Segment::v1a_1: v(1, 0) = r.r1_a(1.0 / k) * e21; break;
    case Segment::v1r_1: v(1, 0) = r.r1_r(1.0 / k) * e21; break;
    case Segment::v4a_1: v(0, 1) = -r.r2_a(1.0 / k) / e21; break;
    case Segment::v4r_1: v(0, 1) = -r.r2_r(1.0 / k) / e21; break;
    case Segment::v1_2:
      v(0, 1) = r.r2_a(1.0 / k) / e21;
      v(2, 0) = -r.r1_a(w2 * k) * e31;
      v(2, 1) = r.r2_a(w * k) * e32;
      break;
    case Segment::v2_2: {
      const SplitTerms s{r};
      v += matrix({{r.r1_r(w2 * k) * r.r2_r(w2 * k), s.g2(w * k) / e21, -r.r2_r(w2 * k) / e31},
                   {s.g1(w * k) * e21, s.g(w * k), s.h1(w * k) / e32},
                   {-r.r1_r(w2 * k) * e31, s.h2(w * k) * e32, 0.0}});
      break;
    }
    case Segment::v3_2:
      v(0, 2) = -r.r2_a(w2 * k) / e31;
      v(1, 0) = r.r1_a(1.0 / k) * e21;
      v(1, 2) = r.r1_a(w * k) / e32;
      break;
    case Segment::v4_2:
      v(0, 1) = r.rhat_a(1, k) / e21;
      v(2, 0) = r.r2_a(1.0 / (w2 * k)) * e31;
      v(2, 1) = -r.r1_a(1.0 / (w * k)) * e32;
      break;
    case Segment::v5_2: {
      // The remainder part is not available in closed form; it vanishes for an exact split.
      const cplx d = 1.0 + r.r1(k) * r.r2(k);
      v(0, 0) = d;
      v(1, 1) = 1.0 / d;
      break;
    }
    case Segment::v6_2:
      v(0, 2) = r.r1_a(1.0 / (w2 * k)) / e31;
      v(1, 0) = r.rhat_a(2, k) * e21;
      v(1, 2) = -r.r2_a(1.0 / (w * k)) / e32;
      break;
    case Segment::v7_2:
      v(1, 0) = -r.r2_a(k) * e21;
      v(2, 0) = r.r1_a(w2 * k) * e31;
      v(2, 1) = r.r1_a(1.0 / (w * k)) * e32;
      break;
    case Segment::v8_2: {
      const SplitTerms s{r};
      v += matrix({{0.0, -r.r1_r(k) / e21, s.h2(w2 * k) / e31},
                   {-r.r2_r(k) * e21, r.r1_r(k) * r.r2_r(k), s.g2(w2 * k) / e32},
                   {s.h1(w2 * k) * e31, s.g1(w2 * k) * e32, s.g(w2 * k)}});
      break;
    }
    case Segment::v9_2:
      v(0, 1) = -r.r1_a(k) / e21;
      v(0, 2) = r.r2_a(w2 * k) / e31;
      v(1, 2) = r.r2_a(1.0 / (w * k)) / e32;
      break;
    case Segment::v1s_2:
      v(2, 0) = -(r.r1_a(w2 * k) + r.r2_a(k) * r.r1_a(1.0 / (w * k)) + r.r2_a(1.0 / (w2 * k))) * e31;
      break;
    case Segment::v4_3: v(0, 1) = r.rhat_a(1, k) / e21; break;
    case Segment::v4u_3:
      v(2, 0) = r.r2_a(1.0 / (w2 * k)) * e31;
      v(2, 1) = -r.r1_a(1.0 / (w * k)) * e32;
      break;
    case Segment::v6_3: v(1, 0) = r.rhat_a(2, k) * e21; break;
    case Segment::v6d_3:
      v(0, 2) = r.r1_a(1.0 / (w2 * k)) / e31;
      v(1, 2) = -r.r2_a(1.0 / (w * k)) / e32;
      break;
    case Segment::v7_3: v(1, 0) = -r.r2_a(k) * e21; break;
    case Segment::v7u_3:
      v(2, 0) = (r.r1_a(w2 * k) + r.r1_a(1.0 / (w * k)) * r.r2_a(k)) * e31;
      v(2, 1) = r.r1_a(1.0 / (w * k)) * e32;
      break;
    case Segment::v9_3: v(0, 1) = -r.r1_a(k) / e21; break;
    case Segment::v9d_3:
      v(0, 2) = (r.r2_a(w2 * k) + r.r1_a(k) * r.r2_a(1.0 / (w * k))) / e31;
      v(1, 2) = r.r2_a(1.0 / (w * k)) / e32;
      break;
  }
  return v;
}

// Thread-safe memo of one reflection coefficient keyed by the exact k.
class Memo {
 public:
  explicit Memo(std::function<cplx(cplx)> compute) : compute_(std::move(compute)) {}

  cplx operator()(cplx k) {
    const std::pair key{k.real(), k.imag()};
    {
      std::lock_guard lock(mutex_);
      if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    const cplx value = compute_(k);
    std::lock_guard lock(mutex_);
    cache_.emplace(key, value);
    return value;
  }

 private:
  std::function<cplx(cplx)> compute_;
  std::mutex mutex_;
  std::map<std::pair<double, double>, cplx> cache_;
};

}  // namespace

std::string_view to_string(Segment segment) {
  static constexpr std::array<std::string_view, all_segments.size()> names = {
      "1'",     "1''",    "2'",     "2''",    "3'",     "3''",    "4'",     "4''",    "5'",     "5''",
      "6'",     "6''",    "7",      "8",      "9",      "1a(1)",  "1r(1)",  "4a(1)",  "4r(1)",  "1(2)",
      "2(2)",   "3(2)",   "4(2)",   "5(2)",   "6(2)",   "7(2)",   "8(2)",   "9(2)",   "1s(2)",  "4(3)",
      "4u(3)",  "6(3)",   "6d(3)",  "7(3)",   "7u(3)",  "9(3)",   "9d(3)",
  };
  return names[static_cast<std::size_t>(segment)];
}

ReflectionSampler::ReflectionSampler(Function r1, Function r2) : r1_(std::move(r1)), r2_(std::move(r2)) {}

ReflectionSampler::ReflectionSampler(Function r1, Function r2, Function r1_a, Function r2_a)
    : r1_(std::move(r1)), r2_(std::move(r2)), r1_a_(std::move(r1_a)), r2_a_(std::move(r2_a)) {
  if (!r1_a_ || !r2_a_) throw ConfigError("a split needs both analytic parts");
}

cplx ReflectionSampler::rhat_a(int j, cplx k) const {
  if (j != 1 && j != 2) throw DomainError("rhat index must be 1 or 2");
  return (j == 1 ? r1_a(k) : r2_a(k)) / (1.0 + r1(k) * r2(k));
}

ReflectionSampler circle_consistent_family(ReflectionSampler::Function r1) {
  auto r2 = [r1](cplx k) {
    const cplx denominator = 1.0 - r1(omega * k) * r1(omega * omega / k);
    if (std::abs(denominator) < 1e-12) throw DomainError("circle-consistent r2 is singular here");
    return (r1(omega * k) * r1(omega * omega * k) - r1(1.0 / k)) / denominator;
  };
  return ReflectionSampler(std::move(r1), std::move(r2));
}

ReflectionSampler computed_sampler(const InitialData& data, const JostOptions& options) {
  auto r1 = std::make_shared<Memo>([data, options](cplx k) { return reflection_r1(data, k, options); });
  auto r2 = std::make_shared<Memo>([data, options](cplx k) { return reflection_r2(data, k, options); });
  return ReflectionSampler([r1](cplx k) { return (*r1)(k); }, [r2](cplx k) { return (*r2)(k); });
}

cplx f_circle(const ReflectionSampler& r, cplx k) {
  const cplx mirrored = 1.0 / (omega * omega * k);
  return 1.0 + r.r1(k) * r.r2(k) + r.r1(mirrored) * r.r2(mirrored);
}

JumpMatrix build_jump(const ReflectionSampler& r, double x, double t, cplx k, Segment segment) {
  return {segment, jump_value(r, x, t, k, segment)};
}

Segment circle_segment(cplx k, double clearance) {
  if (std::abs(std::abs(k) - 1.0) > 1e-12) throw DomainError("circle_segment needs |k| = 1");
  double theta = std::arg(k) - pi / 6;
  if (theta < 0) theta += 2 * pi;
  const double sector = theta / (pi / 3);
  const double offset = sector - std::floor(sector);
  if (std::min(offset, 1.0 - offset) * (pi / 3) < clearance)
    throw DomainError("unit-circle point too close to an intersection point of the contour");
  static constexpr std::array labels = {Segment::v9, Segment::v7, Segment::v8};
  return labels[static_cast<std::size_t>(sector) % 3];
}

SymmetryReport check_symmetries(const ReflectionSampler& r, double x, double t, std::span<const cplx> samples,
                                int threads) {
  std::vector<double> res_A(samples.size()), res_B(samples.size());
  const Mat3& A = mat_A();
  const Mat3& B = mat_B();
  parallel_for(samples.size(), threads, [&](std::size_t i) {
    const cplx k = samples[i];
    const Mat3 v = jump_value(r, x, t, k, circle_segment(k));
    const cplx rotated = omega * k, inverted = 1.0 / k;
    const Mat3 vA = jump_value(r, x, t, rotated, circle_segment(rotated));
    const Mat3 vB = jump_value(r, x, t, inverted, circle_segment(inverted));
    res_A[i] = max_abs(v - A * vA * A.inverse());
    res_B[i] = max_abs(v - B * vB.inverse() * B);
  });
  SymmetryReport report;
  report.samples = samples.size();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    report.residual_A = std::max(report.residual_A, res_A[i]);
    report.residual_B = std::max(report.residual_B, res_B[i]);
  }
  return report;
}

std::vector<FactorizationResidual> check_factorizations(const ReflectionSampler& r, double x, double t,
                                                        std::span<const cplx> samples) {
  using Product = std::function<double(cplx)>;
  const auto v = [&](Segment s, cplx k) { return jump_value(r, x, t, k, s); };
  const Mat3& A = mat_A();
  const Mat3& B = mat_B();
  std::vector<std::pair<std::string, Product>> identities = {
      {"v1'' = v1a(1) v1r(1)",
       [&](cplx k) { return max_abs(v(Segment::v1pp, k) - v(Segment::v1a_1, k) * v(Segment::v1r_1, k)); }},
      {"v4' = v4a(1) v4r(1)",
       [&](cplx k) { return max_abs(v(Segment::v4p, k) - v(Segment::v4a_1, k) * v(Segment::v4r_1, k)); }},
      {"v9 = v3(2) v2(2) v1(2)",
       [&](cplx k) {
         return max_abs(v(Segment::v9, k) - v(Segment::v3_2, k) * v(Segment::v2_2, k) * v(Segment::v1_2, k));
       }},
      {"v7 = v7(2) v8(2) v9(2)",
       [&](cplx k) {
         return max_abs(v(Segment::v7, k) - v(Segment::v7_2, k) * v(Segment::v8_2, k) * v(Segment::v9_2, k));
       }},
      {"v4(2) = v4(3) v4u(3)",
       [&](cplx k) { return max_abs(v(Segment::v4_2, k) - v(Segment::v4_3, k) * v(Segment::v4u_3, k)); }},
      {"v6(2) = v6d(3) v6(3)",
       [&](cplx k) { return max_abs(v(Segment::v6_2, k) - v(Segment::v6d_3, k) * v(Segment::v6_3, k)); }},
      {"v7(2) = v7u(3) v7(3)",
       [&](cplx k) { return max_abs(v(Segment::v7_2, k) - v(Segment::v7u_3, k) * v(Segment::v7_3, k)); }},
      {"v9(2) = v9(3) v9d(3)",
       [&](cplx k) { return max_abs(v(Segment::v9_2, k) - v(Segment::v9_3, k) * v(Segment::v9d_3, k)); }},
      {"v1s(2) = v7(2)^-1 A B v9(2)(1/(wk))^-1 B A^-1",
       [&](cplx k) {
         const Mat3 product =
             v(Segment::v7_2, k).inverse() * A * B * v(Segment::v9_2, 1.0 / (omega * k)).inverse() * B * A.inverse();
         return max_abs(v(Segment::v1s_2, k) - product);
       }},
  };
  if (r.exact())
    identities.emplace_back("v7^-1 = v6(2) v5(2) v4(2)", [&](cplx k) {
      return max_abs(v(Segment::v7, k).inverse() - v(Segment::v6_2, k) * v(Segment::v5_2, k) * v(Segment::v4_2, k));
    });
  std::vector<FactorizationResidual> report;
  for (const auto& [name, residual] : identities) {
    FactorizationResidual row{name, 0.0, samples.size()};
    for (cplx k : samples) row.max_residual = std::max(row.max_residual, residual(k));
    report.push_back(std::move(row));
  }
  return report;
}

double max_determinant_defect(const ReflectionSampler& r, double x, double t, std::span<const cplx> samples) {
  double worst = 0.0;
  for (cplx k : samples)
    for (Segment s : all_segments) worst = std::max(worst, std::abs(jump_value(r, x, t, k, s).determinant() - 1.0));
  return worst;
}

std::vector<cplx> circle_samples(std::size_t count, unsigned seed, double clearance) {
  std::mt19937 engine(seed);
  std::uniform_real_distribution<double> angle(0.0, 2 * pi);
  std::vector<cplx> samples;
  while (samples.size() < count) {
    const cplx k = std::polar(1.0, angle(engine));
    try {
      circle_segment(k, clearance);
    } catch (const DomainError&) {
      continue;
    }
    samples.push_back(k);
  }
  return samples;
}

}  // namespace bsq
