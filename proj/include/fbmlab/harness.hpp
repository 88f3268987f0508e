#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fbmlab/estimator.hpp"
#include "fbmlab/fbm.hpp"
#include "fbmlab/quadvar.hpp"

namespace fbmlab::harness {

enum class ExperimentKind {
  kTable1,
  kTable2,
  kTable3,
  kQvConcentration,
  kQvLimit,
  kEigenvalueBound,
};

ExperimentKind parse_experiment_kind(const std::string& name);
std::string to_string(ExperimentKind kind);

// Full sweep description.  `step` (h, horizon grows as T = n h) and `horizon`
// (fixed T, h shrinks) are mutually exclusive; when neither is set validate()
// applies the default step = 0.05.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::kTable1;
  std::vector<double> hurst_grid = {0.55, 0.60, 0.65, 0.70, 0.75,
                                    0.80, 0.85, 0.90, 0.95};
  std::vector<std::size_t> n_grid = {100, 250, 1000, 2500, 10000};
  std::optional<double> step;
  std::optional<double> horizon;
  std::size_t replications = 50;
  std::uint64_t seed = 0;
  quadvar::VariationOrder order = quadvar::VariationOrder::kFirst;
  double beta = 0.05;
  fbm::GeneratorMethod method = fbm::GeneratorMethod::kCirculant;
  estimator::GateWidth gate_width = estimator::GateWidth::kDefinition;
  std::string output_path = "report.csv";
  unsigned threads = 0;  // 0 = hardware concurrency
  bool large = false;    // allow n > 10^4

  // Throws ConfigError on inconsistent settings; resolves the step default.
  void validate();
  double horizon_for(std::size_t n) const;
};

// Flat key = value file, '#' comments; keys mirror the field names.
ExperimentConfig parse_config_file(const std::string& filename);
void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value);

struct ReportRow {
  ExperimentKind experiment = ExperimentKind::kTable1;
  double hurst = 0.0;
  std::size_t n = 0;
  std::size_t replication = 0;
  int order = 1;
  double raw = 0.0;
  double scaled = 0.0;
  bool gated_out = false;
  std::string status = "ok";  // "ok" or "failed:<reason>"

  bool ok() const noexcept { return status == "ok"; }
};

struct SummaryRow {
  ExperimentKind experiment = ExperimentKind::kTable1;
  double hurst = 0.0;
  std::size_t n = 0;
  int order = 1;
  double median = 0.0;
  double mean = 0.0;
  double stderr_mean = 0.0;
  double gate_fraction = 0.0;
  std::size_t ok_count = 0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<ReportRow> rows;        // ordered by (H-index, n-index, replication)
  std::vector<SummaryRow> summaries;  // ordered by (H-index, n-index, order)
};

// Runs the sweep, parallel over replications, deterministic output.
// Failed replications become failure rows; the sweep continues.
ExperimentReport run_experiment(const ExperimentConfig& config);

// Header: experiment,H,n,replication,order,raw,scaled,gated_out,status
void write_report_csv(const std::string& filename, const ExperimentReport& report);
// Header: experiment,H,n,order,median,mean,stderr,gate_fraction
void write_summary_csv(const std::string& filename, const ExperimentReport& report);
// "x.csv" -> "x.summary.csv" (appends ".summary.csv" when no .csv suffix).
std::string summary_path_for(const std::string& report_path);

// Median of a copy; NaN for an empty sample.  Exposed for report consumers.
double median(std::vector<double> values);

}  // namespace fbmlab::harness
