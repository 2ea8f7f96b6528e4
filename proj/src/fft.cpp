#include "boussinesq/fft.hpp"

#include <fftw3.h>

#include <memory>
#include <mutex>
#include <type_traits>

namespace bsq {

namespace {

// Planning touches global FFTW state; execution on a finished plan is thread-safe.
std::mutex& planner_mutex() {
  static std::mutex mutex;
  return mutex;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* plan) const {
    const std::scoped_lock lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

}  // namespace

void fft_inplace(std::span<cplx> data, FftDirection direction) {
  if (data.empty()) return;
  auto* buffer = reinterpret_cast<fftw_complex*>(data.data());
  Plan plan;
  {
    const std::scoped_lock lock(planner_mutex());
    plan.reset(fftw_plan_dft_1d(static_cast<int>(data.size()), buffer, buffer,
                                direction == FftDirection::forward ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE));
  }
  if (!plan) throw ConvergenceError("FFTW planning failed");
  fftw_execute(plan.get());
}

}  // namespace bsq
