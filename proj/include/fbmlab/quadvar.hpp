#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "fbmlab/fbm.hpp"

namespace fbmlab::quadvar {

enum class VariationOrder { kFirst = 1, kSecond = 2 };

constexpr int order_value(VariationOrder order) noexcept {
  return static_cast<int>(order);
}

VariationOrder order_from_int(int order);

// Neumaier-compensated accumulator for long quadratic sums.
class KahanSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// First differences (n terms) or second differences (n - 1 terms).
std::vector<double> increments(const SamplePath& path, VariationOrder order);

// Sum of squared increments of the given order (compensated).
double raw_quadratic_sum(const SamplePath& path, VariationOrder order);

// n^{2H-1} times the raw quadratic sum.
double normalized_qv(const SamplePath& path, VariationOrder order, HurstIndex h);

// Normalized partial sum over increments up to index r(t) (order 1) or
// r(t) - 1 (order 2).
double running_qv(const SamplePath& path, VariationOrder order, HurstIndex h, double t);

// Exact expectation of running_qv for a fractional Brownian path on the grid:
// n^{2H-1} * (number of terms) * c_i (T/n)^{2H}.
double expected_qv(double t, const UniformGrid& grid, HurstIndex h, VariationOrder order);

// n^{2H-1} * max_k | sum_{j<=k} (increment_j)^2 - k * e | with e the exact
// per-term expectation from the second_order_increment_covariance diagonal.
double sup_deviation(const SamplePath& path, VariationOrder order, HurstIndex h);

// Limit constants of the normalized quadratic variation on [0, 1]:
// c_1 = 1, c_2 = 4 - 2^{2H}.
double qv_limit_constant(VariationOrder order, HurstIndex h);

}  // namespace fbmlab::quadvar
