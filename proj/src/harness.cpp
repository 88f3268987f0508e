#include "fbmlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "fbmlab/path_io.hpp"
#include "fbmlab/sde.hpp"

namespace fbmlab::harness {

namespace {

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string strip(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& text, const std::string& key) {
  double value = 0.0;
  const std::string t = strip(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size()) {
    throw ConfigError("bad numeric value '" + text + "' for " + key);
  }
  return value;
}

std::uint64_t parse_u64(const std::string& text, const std::string& key) {
  std::uint64_t value = 0;
  const std::string t = strip(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size()) {
    throw ConfigError("bad integer value '" + text + "' for " + key);
  }
  return value;
}

bool parse_bool(const std::string& text, const std::string& key) {
  const std::string t = lowercase(strip(text));
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError("bad boolean value '" + text + "' for " + key);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) parts.push_back(strip(item));
  return parts;
}

std::string sanitize_status(std::string text) {
  for (char& c : text) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return text;
}

double table_scaled(ExperimentKind kind, double raw, std::size_t n) {
  const double dn = static_cast<double>(n);
  switch (kind) {
    case ExperimentKind::kTable2:
      return raw * std::pow(dn, 0.25) * std::pow(std::log(dn), -0.3);
    case ExperimentKind::kTable3:
      return raw * std::pow(dn, 0.5) * std::pow(std::log(dn), -0.5);
    default:
      return raw;
  }
}

double sample_mean(const std::vector<double>& v) {
  if (v.empty()) return std::nan("");
  quadvar::KahanSum sum;
  for (double x : v) sum.add(x);
  return sum.value() / static_cast<double>(v.size());
}

double standard_error(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return std::nan("");
  quadvar::KahanSum sq;
  for (double x : v) sq.add((x - mean) * (x - mean));
  const double var = sq.value() / static_cast<double>(v.size() - 1);
  return std::sqrt(var / static_cast<double>(v.size()));
}

}  // namespace

ExperimentKind parse_experiment_kind(const std::string& name) {
  const std::string t = lowercase(strip(name));
  if (t == "table1") return ExperimentKind::kTable1;
  if (t == "table2") return ExperimentKind::kTable2;
  if (t == "table3") return ExperimentKind::kTable3;
  if (t == "qv_concentration") return ExperimentKind::kQvConcentration;
  if (t == "qv_limit") return ExperimentKind::kQvLimit;
  if (t == "eigenvalue_bound") return ExperimentKind::kEigenvalueBound;
  throw ConfigError("unknown experiment '" + name + "'");
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kTable1: return "table1";
    case ExperimentKind::kTable2: return "table2";
    case ExperimentKind::kTable3: return "table3";
    case ExperimentKind::kQvConcentration: return "qv_concentration";
    case ExperimentKind::kQvLimit: return "qv_limit";
    case ExperimentKind::kEigenvalueBound: return "eigenvalue_bound";
  }
  return "table1";
}

void ExperimentConfig::validate() {
  if (step && horizon) {
    throw ConfigError("step and horizon are mutually exclusive; set only one");
  }
  if (!step && !horizon) step = 0.05;
  if (step && !(*step > 0.0)) throw ConfigError("step must be positive");
  if (horizon && !(*horizon > 0.0)) throw ConfigError("horizon must be positive");
  if (hurst_grid.empty()) throw ConfigError("hurst_grid must not be empty");
  for (double v : hurst_grid) {
    if (!(v > 0.0) || !(v < 1.0)) {
      throw ConfigError("hurst_grid values must lie in (0, 1)");
    }
  }
  if (n_grid.empty()) throw ConfigError("n_grid must not be empty");
  for (std::size_t n : n_grid) {
    if (n == 0) throw ConfigError("n_grid values must be positive");
    if (n > 10000 && !large) {
      std::ostringstream msg;
      msg << "n = " << n << " exceeds the desk-scale guard of 10000; set large = true";
      throw ConfigError(msg.str());
    }
  }
  if (replications == 0) throw ConfigError("replications must be at least 1");
  if (!(beta > 0.0)) throw ConfigError("beta must be positive");
  if (output_path.empty()) throw ConfigError("output_path must not be empty");
}

double ExperimentConfig::horizon_for(std::size_t n) const {
  if (horizon) return *horizon;
  return step.value_or(0.05) * static_cast<double>(n);
}

void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value) {
  const std::string k = lowercase(strip(key));
  if (k == "experiment") {
    config.experiment = parse_experiment_kind(value);
  } else if (k == "hurst_grid") {
    std::vector<double> grid;
    for (const std::string& item : split_list(value)) {
      grid.push_back(parse_double(item, "hurst_grid"));
    }
    config.hurst_grid = std::move(grid);
  } else if (k == "n_grid") {
    std::vector<std::size_t> grid;
    for (const std::string& item : split_list(value)) {
      grid.push_back(static_cast<std::size_t>(parse_u64(item, "n_grid")));
    }
    config.n_grid = std::move(grid);
  } else if (k == "step") {
    config.step = parse_double(value, "step");
    config.horizon.reset();
  } else if (k == "horizon") {
    config.horizon = parse_double(value, "horizon");
    config.step.reset();
  } else if (k == "replications") {
    config.replications = static_cast<std::size_t>(parse_u64(value, "replications"));
  } else if (k == "seed") {
    config.seed = parse_u64(value, "seed");
  } else if (k == "order") {
    const std::uint64_t order = parse_u64(value, "order");
    if (order != 1 && order != 2) throw ConfigError("order must be 1 or 2");
    config.order = quadvar::order_from_int(static_cast<int>(order));
  } else if (k == "beta") {
    config.beta = parse_double(value, "beta");
  } else if (k == "method") {
    config.method = fbm::parse_generator_method(lowercase(strip(value)));
  } else if (k == "gate_width") {
    config.gate_width = estimator::parse_gate_width(lowercase(strip(value)));
  } else if (k == "output_path") {
    config.output_path = strip(value);
  } else if (k == "threads") {
    config.threads = static_cast<unsigned>(parse_u64(value, "threads"));
  } else if (k == "large") {
    config.large = parse_bool(value, "large");
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

ExperimentConfig parse_config_file(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw IoError("cannot open config file '" + filename + "'");
  ExperimentConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string text = strip(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      std::ostringstream msg;
      msg << filename << ": line " << line_no << ": expected 'key = value'";
      throw ConfigError(msg.str());
    }
    apply_config_entry(config, text.substr(0, eq), text.substr(eq + 1));
  }
  return config;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

namespace {

// One replication of a randomized experiment.  Pure given the derived stream.
ReportRow run_random_task(const ExperimentConfig& config, std::size_t hi, std::size_t ni,
                          std::size_t rep) {
  ReportRow row;
  row.experiment = config.experiment;
  row.hurst = config.hurst_grid[hi];
  row.n = config.n_grid[ni];
  row.replication = rep;
  row.order = quadvar::order_value(config.order);
  try {
    const HurstIndex h(config.hurst_grid[hi]);
    const std::size_t n = config.n_grid[ni];
    const double t_final = config.horizon_for(n);
    RngStream stream = RngStream::for_replication(config.seed, hi, ni, rep);
    switch (config.experiment) {
      case ExperimentKind::kTable1:
      case ExperimentKind::kTable2:
      case ExperimentKind::kTable3: {
        const UniformGrid fine(2 * n, t_final);
        fbm::FbmGenerator generator(fine, h, config.method);
        const SamplePath driver = generator.sample(stream);
        const SamplePath solution = sde::fou_solve(driver);
        estimator::EstimatorConfig est_config;
        est_config.order = config.order;
        est_config.beta = config.beta;
        est_config.gating = true;
        est_config.gate_width = config.gate_width;
        const auto estimate = estimator::estimate_hurst(solution, est_config);
        row.raw = std::abs(estimate.estimate - h.value());
        row.scaled = table_scaled(config.experiment, row.raw, n);
        row.gated_out = estimate.gated_out;
        break;
      }
      case ExperimentKind::kQvConcentration: {
        const UniformGrid grid(n, t_final);
        fbm::FbmGenerator generator(grid, h, config.method);
        const SamplePath driver = generator.sample(stream);
        row.raw = quadvar::sup_deviation(driver, config.order, h);
        row.scaled = row.raw * std::pow(static_cast<double>(n), 0.5) *
                     std::pow(std::log(static_cast<double>(n)), -0.5);
        break;
      }
      case ExperimentKind::kQvLimit: {
        const UniformGrid grid(n, t_final);
        fbm::FbmGenerator generator(grid, h, config.method);
        const SamplePath driver = generator.sample(stream);
        const SamplePath solution = sde::fou_solve(driver);
        const double limit = quadvar::qv_limit_constant(config.order, h) *
                             std::pow(t_final, 2.0 * h.value());
        row.raw = std::abs(quadvar::normalized_qv(solution, config.order, h) - limit);
        row.scaled = row.raw * std::pow(static_cast<double>(n), 0.25) *
                     std::pow(std::log(static_cast<double>(n)), -0.25);
        break;
      }
      case ExperimentKind::kEigenvalueBound:
        throw DomainError("eigenvalue tasks are not randomized");
    }
    if (!std::isfinite(row.raw) || !std::isfinite(row.scaled)) {
      throw DomainError("non-finite statistic");
    }
  } catch (const std::exception& e) {
    row.raw = std::nan("");
    row.scaled = std::nan("");
    row.gated_out = false;
    row.status = "failed:" + sanitize_status(e.what());
  }
  return row;
}

// Deterministic eigenvalue row for one (H, n, order) cell.
ReportRow run_eigen_task(const ExperimentConfig& config, std::size_t hi, std::size_t ni,
                         int order) {
  ReportRow row;
  row.experiment = config.experiment;
  row.hurst = config.hurst_grid[hi];
  row.n = config.n_grid[ni];
  row.replication = 0;
  row.order = order;
  try {
    const HurstIndex h(config.hurst_grid[hi]);
    const std::size_t n = config.n_grid[ni];
    const double t_final = config.horizon_for(n);
    row.raw = fbm::max_increment_eigenvalue(n, t_final, h, order);
    row.scaled = static_cast<double>(n) * row.raw;
    if (!std::isfinite(row.raw) || !std::isfinite(row.scaled)) {
      throw DomainError("non-finite statistic");
    }
  } catch (const std::exception& e) {
    row.raw = std::nan("");
    row.scaled = std::nan("");
    row.status = "failed:" + sanitize_status(e.what());
  }
  return row;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
  ExperimentReport report;
  report.config = config;
  report.config.validate();
  const ExperimentConfig& cfg = report.config;

  const bool eigen = cfg.experiment == ExperimentKind::kEigenvalueBound;
  const std::size_t n_h = cfg.hurst_grid.size();
  const std::size_t n_n = cfg.n_grid.size();
  const std::size_t per_cell = eigen ? 2 : cfg.replications;
  const std::size_t task_count = n_h * n_n * per_cell;
  report.rows.resize(task_count);

  auto run_task = [&](std::size_t index) {
    const std::size_t cell = index / per_cell;
    const std::size_t inner = index % per_cell;
    const std::size_t hi = cell / n_n;
    const std::size_t ni = cell % n_n;
    report.rows[index] = eigen ? run_eigen_task(cfg, hi, ni, static_cast<int>(inner) + 1)
                               : run_random_task(cfg, hi, ni, inner);
  };

  unsigned workers = cfg.threads != 0 ? cfg.threads : std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  if (static_cast<std::size_t>(workers) > task_count) {
    workers = static_cast<unsigned>(task_count);
  }
  if (workers <= 1) {
    for (std::size_t i = 0; i < task_count; ++i) run_task(i);
  } else {
    std::atomic<std::size_t> cursor{0};
    auto drain = [&]() {
      for (std::size_t i = cursor.fetch_add(1); i < task_count; i = cursor.fetch_add(1)) {
        run_task(i);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(drain);
    drain();
    for (std::thread& t : pool) t.join();
  }

  // Summaries per (H, n, order), in row order.
  for (std::size_t hi = 0; hi < n_h; ++hi) {
    for (std::size_t ni = 0; ni < n_n; ++ni) {
      const std::size_t base = (hi * n_n + ni) * per_cell;
      const std::vector<int> orders =
          eigen ? std::vector<int>{1, 2} : std::vector<int>{quadvar::order_value(cfg.order)};
      for (int order : orders) {
        SummaryRow summary;
        summary.experiment = cfg.experiment;
        summary.hurst = cfg.hurst_grid[hi];
        summary.n = cfg.n_grid[ni];
        summary.order = order;
        std::vector<double> raws;
        std::size_t gated = 0;
        for (std::size_t k = 0; k < per_cell; ++k) {
          const ReportRow& row = report.rows[base + k];
          if (row.order != order || !row.ok()) continue;
          raws.push_back(row.raw);
          if (row.gated_out) ++gated;
        }
        summary.ok_count = raws.size();
        summary.median = median(raws);
        summary.mean = sample_mean(raws);
        summary.stderr_mean = standard_error(raws, summary.mean);
        summary.gate_fraction = raws.empty()
                                    ? std::nan("")
                                    : static_cast<double>(gated) / static_cast<double>(raws.size());
        report.summaries.push_back(summary);
      }
    }
  }
  return report;
}

void write_report_csv(const std::string& filename, const ExperimentReport& report) {
  std::ofstream out(filename);
  if (!out) throw IoError("cannot open '" + filename + "' for writing");
  out << "experiment,H,n,replication,order,raw,scaled,gated_out,status\n";
  for (const ReportRow& row : report.rows) {
    out << to_string(row.experiment) << ',' << io::format_double(row.hurst) << ',' << row.n
        << ',' << row.replication << ',' << row.order << ',' << io::format_double(row.raw)
        << ',' << io::format_double(row.scaled) << ',' << (row.gated_out ? 1 : 0) << ','
        << row.status << '\n';
  }
  out.flush();
  if (!out) throw IoError("failed while writing '" + filename + "'");
}

void write_summary_csv(const std::string& filename, const ExperimentReport& report) {
  std::ofstream out(filename);
  if (!out) throw IoError("cannot open '" + filename + "' for writing");
  out << "experiment,H,n,order,median,mean,stderr,gate_fraction\n";
  for (const SummaryRow& row : report.summaries) {
    out << to_string(row.experiment) << ',' << io::format_double(row.hurst) << ',' << row.n
        << ',' << row.order << ',' << io::format_double(row.median) << ','
        << io::format_double(row.mean) << ',' << io::format_double(row.stderr_mean) << ','
        << io::format_double(row.gate_fraction) << '\n';
  }
  out.flush();
  if (!out) throw IoError("failed while writing '" + filename + "'");
}

std::string summary_path_for(const std::string& report_path) {
  const std::string suffix = ".csv";
  if (report_path.size() > suffix.size() &&
      report_path.compare(report_path.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return report_path.substr(0, report_path.size() - suffix.size()) + ".summary.csv";
  }
  return report_path + ".summary.csv";
}

}  // namespace fbmlab::harness
