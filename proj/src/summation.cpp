#include "helicity_lab/summation.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>

namespace hlab {

double compensated_total(std::span<const double> values) {
  CompensatedSum sum;
  for (double v : values) sum.add(v);
  return sum.value();
}

unsigned worker_count() {
  static const unsigned count = [] {
    const char* env = std::getenv("HELICITY_LAB_THREADS");
    if (env == nullptr) return 1u;
    try {
      const long v = std::stol(env);
      return v < 1 ? 1u : unsigned(v);
    } catch (...) {
      return 1u;
    }
  }();
  return count;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const unsigned workers = std::min<std::size_t>(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
}

double deterministic_sum(std::size_t count, const std::function<double(std::size_t)>& partial) {
  std::vector<double> parts(count);
  parallel_for(count, [&](std::size_t i) { parts[i] = partial(i); });
  return compensated_total(parts);
}

}  // namespace hlab
