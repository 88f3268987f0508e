#include "fbmlab/quadvar.hpp"

#include <sstream>

namespace fbmlab::quadvar {

namespace {

void require_enough_steps(const SamplePath& path, VariationOrder order) {
  if (path.grid().n() < static_cast<std::size_t>(order_value(order))) {
    std::ostringstream msg;
    msg << "path with " << path.grid().n() << " steps is too short for order "
        << order_value(order) << " increments";
    throw DomainError(msg.str());
  }
}

// Number of increment terms entering the partial sum up to node index r.
std::size_t term_count(std::size_t r, VariationOrder order) {
  if (order == VariationOrder::kFirst) return r;
  return r >= 1 ? r - 1 : 0;
}

}  // namespace

VariationOrder order_from_int(int order) {
  if (order == 1) return VariationOrder::kFirst;
  if (order == 2) return VariationOrder::kSecond;
  std::ostringstream msg;
  msg << "variation order must be 1 or 2, got " << order;
  throw DomainError(msg.str());
}

std::vector<double> increments(const SamplePath& path, VariationOrder order) {
  require_enough_steps(path, order);
  const std::vector<double>& v = path.values();
  const std::size_t n = path.grid().n();
  std::vector<double> out;
  if (order == VariationOrder::kFirst) {
    out.resize(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = v[k + 1] - v[k];
  } else {
    out.resize(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) out[k] = v[k + 2] - 2.0 * v[k + 1] + v[k];
  }
  return out;
}

double raw_quadratic_sum(const SamplePath& path, VariationOrder order) {
  require_enough_steps(path, order);
  const std::vector<double>& v = path.values();
  const std::size_t n = path.grid().n();
  KahanSum sum;
  if (order == VariationOrder::kFirst) {
    for (std::size_t k = 0; k < n; ++k) {
      const double d = v[k + 1] - v[k];
      sum.add(d * d);
    }
  } else {
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const double d = v[k + 2] - 2.0 * v[k + 1] + v[k];
      sum.add(d * d);
    }
  }
  return sum.value();
}

double normalized_qv(const SamplePath& path, VariationOrder order, HurstIndex h) {
  const double scale =
      std::pow(static_cast<double>(path.grid().n()), 2.0 * h.value() - 1.0);
  return scale * raw_quadratic_sum(path, order);
}

double running_qv(const SamplePath& path, VariationOrder order, HurstIndex h, double t) {
  require_enough_steps(path, order);
  const UniformGrid& grid = path.grid();
  const std::size_t count = term_count(grid.index_below(t), order);
  const std::vector<double>& v = path.values();
  KahanSum sum;
  for (std::size_t k = 0; k < count; ++k) {
    const double d = (order == VariationOrder::kFirst)
                         ? v[k + 1] - v[k]
                         : v[k + 2] - 2.0 * v[k + 1] + v[k];
    sum.add(d * d);
  }
  const double scale = std::pow(static_cast<double>(grid.n()), 2.0 * h.value() - 1.0);
  return scale * sum.value();
}

double expected_qv(double t, const UniformGrid& grid, HurstIndex h, VariationOrder order) {
  const std::size_t count = term_count(grid.index_below(t), order);
  const double n = static_cast<double>(grid.n());
  const double per_term =
      qv_limit_constant(order, h) * std::pow(grid.step(), 2.0 * h.value());
  return std::pow(n, 2.0 * h.value() - 1.0) * static_cast<double>(count) * per_term;
}

double sup_deviation(const SamplePath& path, VariationOrder order, HurstIndex h) {
  require_enough_steps(path, order);
  const UniformGrid& grid = path.grid();
  const std::size_t n = grid.n();
  const std::size_t total = (order == VariationOrder::kFirst) ? n : n - 1;
  const double per_term = fbm::second_order_increment_covariance(
      1, 1, n, grid.horizon(), h, order_value(order));
  const std::vector<double>& v = path.values();
  KahanSum sum;
  double worst = 0.0;
  for (std::size_t k = 0; k < total; ++k) {
    const double d = (order == VariationOrder::kFirst)
                         ? v[k + 1] - v[k]
                         : v[k + 2] - 2.0 * v[k + 1] + v[k];
    sum.add(d * d);
    const double deviation =
        std::abs(sum.value() - static_cast<double>(k + 1) * per_term);
    worst = std::max(worst, deviation);
  }
  return std::pow(static_cast<double>(n), 2.0 * h.value() - 1.0) * worst;
}

double qv_limit_constant(VariationOrder order, HurstIndex h) {
  if (order == VariationOrder::kFirst) return 1.0;
  return 4.0 - std::pow(2.0, 2.0 * h.value());
}

}  // namespace fbmlab::quadvar
