#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hlab {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

double compensated_total(std::span<const double> values);

/// Number of worker threads, read once from HELICITY_LAB_THREADS (default 1).
unsigned worker_count();

/// Runs body(i) for i in [0, count). Work is split by index only, so any
/// per-index results are independent of the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Sums partial(i) for i in [0, count) with a fixed reduction order.
double deterministic_sum(std::size_t count, const std::function<double(std::size_t)>& partial);

}  // namespace hlab
