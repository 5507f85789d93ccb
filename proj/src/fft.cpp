#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace hlab::detail {
namespace {

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// FFTW's planner is not thread-safe; execution with new arrays is.
fftw_plan plan_for(int n, int sign) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, Plan> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{n, sign}];
  if (!slot) {
    const std::size_t count = std::size_t(n) * n * n;
    fftw_complex* scratch = fftw_alloc_complex(count);
    slot.reset(fftw_plan_dft_3d(n, n, n, scratch, scratch, sign, FFTW_ESTIMATE | FFTW_UNALIGNED));
    fftw_free(scratch);
  }
  return slot.get();
}

void execute(int n, int sign, std::span<Complex> data) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan_for(n, sign), buf, buf);
}

}  // namespace

void fft3d_forward(int n, std::span<Complex> data) { execute(n, FFTW_FORWARD, data); }
void fft3d_backward(int n, std::span<Complex> data) { execute(n, FFTW_BACKWARD, data); }

}  // namespace hlab::detail
