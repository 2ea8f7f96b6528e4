#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "boussinesq/initial_data.hpp"
#include "boussinesq/phase.hpp"
#include "boussinesq/scattering.hpp"

namespace bsq {

// Jump segments of the original problem (primed tags lie outside the unit
// disk, double-primed inside; 7, 8, 9 are unit-circle arcs) and the factors
// produced by the first three transformations.
enum class Segment {
  v1p, v1pp, v2p, v2pp, v3p, v3pp, v4p, v4pp, v5p, v5pp, v6p, v6pp, v7, v8, v9,
  v1a_1, v1r_1, v4a_1, v4r_1,
  v1_2, v2_2, v3_2, v4_2, v5_2, v6_2, v7_2, v8_2, v9_2, v1s_2,
  v4_3, v4u_3, v6_3, v6d_3, v7_3, v7u_3, v9_3, v9d_3,
};

std::string_view to_string(Segment segment);

// Reflection coefficients as functions of k, with an optional split
// r_j = r_{j,a} + r_{j,r}. Without a split the analytic parts are r_j themselves.
class ReflectionSampler {
 public:
  using Function = std::function<cplx(cplx)>;

  ReflectionSampler(Function r1, Function r2);
  ReflectionSampler(Function r1, Function r2, Function r1_a, Function r2_a);

  cplx r1(cplx k) const { return r1_(k); }
  cplx r2(cplx k) const { return r2_(k); }
  cplx r1_a(cplx k) const { return r1_a_ ? r1_a_(k) : r1_(k); }
  cplx r2_a(cplx k) const { return r2_a_ ? r2_a_(k) : r2_(k); }
  cplx r1_r(cplx k) const { return r1_a_ ? r1_(k) - r1_a_(k) : 0.0; }
  cplx r2_r(cplx k) const { return r2_a_ ? r2_(k) - r2_a_(k) : 0.0; }
  // r_{j,a} / (1 + r1 r2): exact when no split is present.
  cplx rhat_a(int j, cplx k) const;
  bool exact() const { return !r1_a_; }

 private:
  Function r1_, r2_, r1_a_, r2_a_;
};

// r2 solving the unit-circle relation r1(1/(w k)) + r2(w k) + r1(w^2 k) r2(1/k) = 0
// for a given r1, so that every factorization becomes an exact identity.
ReflectionSampler circle_consistent_family(ReflectionSampler::Function r1);

// Reflection coefficients of initial data, memoised per k and safe to share across threads.
ReflectionSampler computed_sampler(const InitialData& data, const JostOptions& options = {});

cplx f_circle(const ReflectionSampler& r, cplx k);

struct JumpMatrix {
  Segment segment;
  Mat3 value;
};

JumpMatrix build_jump(const ReflectionSampler& r, double x, double t, cplx k, Segment segment);

// Arc label (7, 8 or 9) of a unit-circle point; throws near the points i kappa_j.
Segment circle_segment(cplx k, double clearance = 1e-6);

struct SymmetryReport {
  double residual_A = 0.0;
  double residual_B = 0.0;
  std::size_t samples = 0;
};

// max |v(k) - A v(w k) A^-1| and |v(k) - B v(1/k)^-1 B| over unit-circle samples.
SymmetryReport check_symmetries(const ReflectionSampler& r, double x, double t, std::span<const cplx> samples,
                                int threads = 1);

struct FactorizationResidual {
  std::string name;
  double max_residual = 0.0;
  std::size_t samples = 0;
};

// Every factorization identity of the first three transformations, plus the
// structure of v1s. Identities needing the exact split are skipped otherwise.
std::vector<FactorizationResidual> check_factorizations(const ReflectionSampler& r, double x, double t,
                                                        std::span<const cplx> samples);

// Largest |det v - 1| over all segments at the samples.
double max_determinant_defect(const ReflectionSampler& r, double x, double t, std::span<const cplx> samples);

// Uniform random unit-circle points that keep the given clearance from i kappa_j.
std::vector<cplx> circle_samples(std::size_t count, unsigned seed, double clearance = 0.02);

}  // namespace bsq
