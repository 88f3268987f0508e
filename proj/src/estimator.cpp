#include "fbmlab/estimator.hpp"

#include <cmath>
#include <sstream>

#include "fbmlab/path_io.hpp"
#include "fbmlab/sde.hpp"

namespace fbmlab::estimator {

GateWidth parse_gate_width(const std::string& name) {
  if (name == "definition") return GateWidth::kDefinition;
  if (name == "proof") return GateWidth::kProof;
  throw ConfigError("unknown gate width '" + name + "' (expected definition or proof)");
}

std::string to_string(GateWidth width) {
  return width == GateWidth::kDefinition ? "definition" : "proof";
}

GateBounds gate_bounds(std::size_t n, double beta, GateWidth width) {
  if (n < 2) throw DomainError("gate bounds need n >= 2");
  if (!(beta > 0.0)) throw DomainError("gate parameter beta must be positive");
  const double ln_n = std::log(static_cast<double>(n));
  const double delta =
      (width == GateWidth::kDefinition)
          ? 2.0 * std::pow(static_cast<double>(n), -0.25) * std::pow(ln_n, 0.25 + beta)
          : std::pow(static_cast<double>(n), -0.25) * std::pow(ln_n, 0.25 + 2.0 * beta);
  return GateBounds{0.5 * (1.0 - delta), 1.0 + delta};
}

double ratio_statistic(const SamplePath& fine, quadvar::VariationOrder order) {
  const std::size_t n = fine.grid().n();
  if (n % 2 != 0) throw DomainError("ratio statistic needs an even number of fine steps");
  if (n / 2 < static_cast<std::size_t>(quadvar::order_value(order))) {
    throw DomainError("coarse grid too short for the increment order");
  }
  const double numerator = quadvar::raw_quadratic_sum(fine, order);
  const double denominator = quadvar::raw_quadratic_sum(sde::subsample(fine, 2), order);
  if (denominator == 0.0) {
    throw DegeneratePathError(
        "coarse quadratic sum is zero; the path is degenerate for the dyadic ratio");
  }
  return numerator / denominator;
}

EstimateResult hurst_from_ratio(double ratio, std::size_t coarse_n,
                                const EstimatorConfig& config) {
  if (!(ratio > 0.0)) {
    std::ostringstream msg;
    msg << "dyadic ratio must be positive, got " << ratio;
    throw DomainError(msg.str());
  }
  EstimateResult result;
  result.ratio = ratio;
  result.coarse_n = coarse_n;
  result.order = config.order;
  result.gate = gate_bounds(coarse_n, config.beta, config.gate_width);
  const bool inside = ratio >= result.gate.lower && ratio <= result.gate.upper;
  result.gated_out = config.gating && !inside;
  result.estimate =
      result.gated_out ? 0.0 : 0.5 - std::log(ratio) / (2.0 * std::log(2.0));
  return result;
}

EstimateResult estimate_hurst(const SamplePath& fine, const EstimatorConfig& config) {
  const std::size_t n = fine.grid().n();
  if (n % 2 != 0) throw DomainError("estimate_hurst needs an even number of fine steps");
  const double ratio = ratio_statistic(fine, config.order);
  return hurst_from_ratio(ratio, n / 2, config);
}

std::string estimate_csv_header() {
  return "order,n,ratio,estimate,gated_out,gate_lower,gate_upper";
}

std::string estimate_csv_row(const EstimateResult& result) {
  std::ostringstream row;
  row << quadvar::order_value(result.order) << ',' << result.coarse_n << ','
      << io::format_double(result.ratio) << ',' << io::format_double(result.estimate) << ','
      << (result.gated_out ? 1 : 0) << ',' << io::format_double(result.gate.lower) << ','
      << io::format_double(result.gate.upper);
  return row.str();
}

}  // namespace fbmlab::estimator
