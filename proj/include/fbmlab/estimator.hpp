#pragma once

#include <cstddef>
#include <string>

#include "fbmlab/quadvar.hpp"

namespace fbmlab::estimator {

// Gate width variants.  kDefinition is the estimator's published width
// 2 n^{-1/4} (ln n)^{1/4+beta}; kProof is the narrower width
// n^{-1/4} (ln n)^{1/4+2 beta} used inside the concentration argument.
enum class GateWidth { kDefinition, kProof };

GateWidth parse_gate_width(const std::string& name);
std::string to_string(GateWidth width);

struct EstimatorConfig {
  quadvar::VariationOrder order = quadvar::VariationOrder::kFirst;
  double beta = 0.05;
  bool gating = true;
  GateWidth gate_width = GateWidth::kDefinition;
};

struct GateBounds {
  double lower;  // (1 - delta) / 2, may be negative for small n
  double upper;  // 1 + delta
};

// Acceptance interval for the dyadic ratio at coarse grid size n >= 2.
GateBounds gate_bounds(std::size_t n, double beta, GateWidth width = GateWidth::kDefinition);

struct EstimateResult {
  double ratio = 0.0;
  double estimate = 0.0;  // 0 exactly when gated_out
  bool gated_out = false;
  std::size_t coarse_n = 0;
  quadvar::VariationOrder order = quadvar::VariationOrder::kFirst;
  GateBounds gate{0.0, 0.0};
};

// R = (raw quadratic sum on the 2n grid) / (raw quadratic sum on the n grid
// obtained by keeping every second node).  The fine path must have an even
// number of steps.  A zero denominator raises DegeneratePathError.
double ratio_statistic(const SamplePath& fine, quadvar::VariationOrder order);

// H-hat = 1/2 - ln(R) / (2 ln 2), gated to 0 outside the acceptance interval
// for the coarse size when config.gating is set.
EstimateResult hurst_from_ratio(double ratio, std::size_t coarse_n,
                                const EstimatorConfig& config = {});

// ratio_statistic + hurst_from_ratio on the fine path (coarse_n = n/2).
EstimateResult estimate_hurst(const SamplePath& fine, const EstimatorConfig& config = {});

std::string estimate_csv_header();
std::string estimate_csv_row(const EstimateResult& result);

}  // namespace fbmlab::estimator
