#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace qcert {

struct WilsonInterval {
  double lower = 0.0;
  double upper = 1.0;
};

/// Wilson score interval for a binomial proportion (default 95%).
inline WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.96) {
  if (trials == 0) throw std::invalid_argument("wilson_interval: trials must be positive");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = p + z2 / (2.0 * n);
  const double spread = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {(center - spread) / denom, (center + spread) / denom};
}

// Running mean/variance over sufficient statistics (count, sum, sum of
// squares), so parallel shards merge exactly.
class MeanAccumulator {
 public:
  void add(double x) {
    ++count_;
    sum_ += x;
    sum_sq_ += x * x;
  }
  void merge(const MeanAccumulator& other) {
    count_ += other.count_;
    sum_ += other.sum_;
    sum_sq_ += other.sum_sq_;
  }
  std::size_t count() const { return count_; }
  double mean() const { return count_ ? sum_ / static_cast<double>(count_) : 0.0; }
  double variance() const {
    if (count_ < 2) return 0.0;
    const double n = static_cast<double>(count_);
    const double v = (sum_sq_ - sum_ * sum_ / n) / (n - 1.0);
    return v > 0.0 ? v : 0.0;
  }
  double std_error() const {
    return count_ ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
  }

 private:
  std::size_t count_ = 0;
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
};

}  // namespace qcert
