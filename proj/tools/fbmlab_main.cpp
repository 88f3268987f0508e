#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fbmlab/estimator.hpp"
#include "fbmlab/fbm.hpp"
#include "fbmlab/harness.hpp"
#include "fbmlab/path_io.hpp"
#include "fbmlab/sde.hpp"

namespace {

using namespace fbmlab;

struct GenFlags {
  double hurst = 0.7;
  std::size_t n = 0;
  double step = 0.0;
  double horizon = 0.0;
  std::uint64_t seed = 0;
  std::string method = "circulant";
  std::string out;
  bool large = false;

  CLI::Option* step_opt = nullptr;
  CLI::Option* horizon_opt = nullptr;
  CLI::Option* hurst_opt = nullptr;
  CLI::Option* n_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* method_opt = nullptr;
};

void add_gen_flags(CLI::App* cmd, GenFlags& flags, bool required) {
  flags.hurst_opt = cmd->add_option("--hurst", flags.hurst, "Hurst index in (0, 1)");
  flags.n_opt = cmd->add_option("--n", flags.n, "number of grid steps");
  if (required) {
    flags.hurst_opt->required();
    flags.n_opt->required();
  }
  flags.step_opt = cmd->add_option("--step", flags.step, "grid step h (horizon T = n h)");
  flags.horizon_opt = cmd->add_option("--horizon", flags.horizon, "fixed horizon T");
  flags.seed_opt = cmd->add_option("--seed", flags.seed, "RNG seed (default 0)");
  flags.method_opt =
      cmd->add_option("--method", flags.method, "generator: cholesky | circulant");
  cmd->add_option("--out", flags.out, "output CSV path (default stdout)");
  cmd->add_flag("--large", flags.large, "allow n > 10000");
}

// Validates the generation flags and returns the grid; usage problems raise
// ConfigError so they map to the usage exit code.
UniformGrid gen_grid(const GenFlags& flags) {
  if (!(flags.hurst > 0.0) || !(flags.hurst < 1.0)) {
    throw ConfigError("--hurst must lie in (0, 1)");
  }
  if (flags.n == 0) throw ConfigError("--n must be at least 1");
  if (flags.n > 10000 && !flags.large) {
    throw ConfigError("--n exceeds the desk-scale guard of 10000; pass --large");
  }
  const bool has_step = flags.step_opt->count() > 0;
  const bool has_horizon = flags.horizon_opt->count() > 0;
  if (has_step == has_horizon) {
    throw ConfigError("pass exactly one of --step or --horizon");
  }
  const double t_final =
      has_horizon ? flags.horizon : flags.step * static_cast<double>(flags.n);
  if (!(t_final > 0.0)) throw ConfigError("the horizon must be positive");
  return UniformGrid(flags.n, t_final);
}

void emit_path(const SamplePath& path, const std::string& out) {
  if (out.empty()) {
    io::write_path_csv(std::cout, path);
  } else {
    io::write_path_csv(out, path);
  }
}

int run_gen(const GenFlags& flags) {
  const UniformGrid grid = gen_grid(flags);
  const HurstIndex h(flags.hurst);
  const fbm::GeneratorMethod method = fbm::parse_generator_method(flags.method);
  std::cerr << "seed = " << flags.seed << "\n";
  emit_path(fbm::generate_fbm(grid, h, flags.seed, method), flags.out);
  return 0;
}

int run_solve(const GenFlags& flags, const std::string& driver_file,
              const std::string& model_name) {
  if (model_name != "fou") {
    throw ConfigError("only the built-in 'fou' model is selectable from the CLI");
  }
  if (!driver_file.empty()) {
    if (flags.hurst_opt->count() > 0 || flags.n_opt->count() > 0 ||
        flags.step_opt->count() > 0 || flags.horizon_opt->count() > 0 ||
        flags.seed_opt->count() > 0 || flags.method_opt->count() > 0) {
      throw ConfigError("--driver excludes the generation flags");
    }
    emit_path(sde::fou_solve(io::read_path_csv(driver_file)), flags.out);
    return 0;
  }
  if (flags.hurst_opt->count() == 0 || flags.n_opt->count() == 0) {
    throw ConfigError("pass --driver FILE, or --hurst and --n to generate the driver");
  }
  const UniformGrid grid = gen_grid(flags);
  const HurstIndex h(flags.hurst);
  const fbm::GeneratorMethod method = fbm::parse_generator_method(flags.method);
  std::cerr << "seed = " << flags.seed << "\n";
  emit_path(sde::fou_solve(fbm::generate_fbm(grid, h, flags.seed, method)), flags.out);
  return 0;
}

int run_estimate(const std::string& in_file, int order, double beta, bool no_gate,
                 const std::string& gate_width, const std::string& out) {
  if (order != 1 && order != 2) throw ConfigError("--order must be 1 or 2");
  if (!(beta > 0.0)) throw ConfigError("--beta must be positive");
  estimator::EstimatorConfig config;
  config.order = quadvar::order_from_int(order);
  config.beta = beta;
  config.gating = !no_gate;
  config.gate_width = estimator::parse_gate_width(gate_width);
  const SamplePath path = io::read_path_csv(in_file);
  const estimator::EstimateResult result = estimator::estimate_hurst(path, config);
  const std::string text =
      estimator::estimate_csv_header() + "\n" + estimator::estimate_csv_row(result) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream file(out);
    if (!file) throw IoError("cannot open '" + out + "' for writing");
    file << text;
    file.flush();
    if (!file) throw IoError("failed while writing '" + out + "'");
  }
  return 0;
}

struct ExperimentFlags {
  std::string config_file;
  std::string experiment;
  std::string hurst_grid;
  std::string n_grid;
  double step = 0.0;
  double horizon = 0.0;
  std::uint64_t replications = 0;
  std::uint64_t seed = 0;
  int order = 0;
  double beta = 0.0;
  std::string method;
  std::string gate_width;
  std::string out;
  std::uint64_t threads = 0;
  bool large = false;
};

int run_experiment_cmd(CLI::App* cmd, const ExperimentFlags& flags) {
  harness::ExperimentConfig config;
  if (!flags.config_file.empty()) {
    config = harness::parse_config_file(flags.config_file);
  }
  auto given = [&](const std::string& name) { return cmd->count(name) > 0; };
  if (given("--experiment")) harness::apply_config_entry(config, "experiment", flags.experiment);
  if (given("--hurst-grid")) harness::apply_config_entry(config, "hurst_grid", flags.hurst_grid);
  if (given("--n-grid")) harness::apply_config_entry(config, "n_grid", flags.n_grid);
  if (given("--step")) {
    config.step = flags.step;
    config.horizon.reset();
  }
  if (given("--horizon")) {
    config.horizon = flags.horizon;
    config.step.reset();
  }
  if (given("--replications")) config.replications = flags.replications;
  if (given("--seed")) config.seed = flags.seed;
  if (given("--order")) {
    if (flags.order != 1 && flags.order != 2) throw ConfigError("--order must be 1 or 2");
    config.order = quadvar::order_from_int(flags.order);
  }
  if (given("--beta")) config.beta = flags.beta;
  if (given("--method")) harness::apply_config_entry(config, "method", flags.method);
  if (given("--gate-width")) harness::apply_config_entry(config, "gate_width", flags.gate_width);
  if (given("--out")) config.output_path = flags.out;
  if (given("--threads")) config.threads = static_cast<unsigned>(flags.threads);
  if (flags.large) config.large = true;
  config.validate();
  std::cerr << "seed = " << config.seed << "\n";
  const harness::ExperimentReport report = harness::run_experiment(config);
  harness::write_report_csv(report.config.output_path, report);
  const std::string summary = harness::summary_path_for(report.config.output_path);
  harness::write_summary_csv(summary, report);
  std::cerr << "report = " << report.config.output_path << "\n";
  std::cerr << "summary = " << summary << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fractional Brownian motion toolkit: exact fBm synthesis, pathwise fOU "
               "solving, quadratic variation, gated dyadic-ratio Hurst estimation"};
  app.require_subcommand(1);

  GenFlags gen_flags;
  CLI::App* gen = app.add_subcommand("gen", "generate an fBm path CSV");
  add_gen_flags(gen, gen_flags, true);

  GenFlags solve_flags;
  std::string driver_file;
  std::string model_name = "fou";
  CLI::App* solve = app.add_subcommand("solve", "solve the fOU equation along a driver");
  solve->add_option("--driver", driver_file, "driver path CSV (skips generation)");
  solve->add_option("--model", model_name, "model name (only 'fou')");
  add_gen_flags(solve, solve_flags, false);

  std::string est_in;
  int est_order = 1;
  double est_beta = 0.05;
  bool est_no_gate = false;
  std::string est_gate_width = "definition";
  std::string est_out;
  CLI::App* estimate = app.add_subcommand("estimate", "estimate H from a path CSV");
  estimate->add_option("--in", est_in, "input path CSV")->required();
  estimate->add_option("--order", est_order, "increment order: 1 | 2");
  estimate->add_option("--beta", est_beta, "gate width parameter (default 0.05)");
  estimate->add_flag("--no-gate", est_no_gate, "disable the acceptance gate");
  estimate->add_option("--gate-width", est_gate_width, "gate width: definition | proof");
  estimate->add_option("--out", est_out, "output CSV path (default stdout)");

  ExperimentFlags exp_flags;
  CLI::App* experiment = app.add_subcommand("experiment", "run a Monte Carlo sweep");
  experiment->add_option("--config", exp_flags.config_file, "key = value config file");
  experiment->add_option("--experiment", exp_flags.experiment,
                         "table1|table2|table3|qv_concentration|qv_limit|eigenvalue_bound");
  experiment->add_option("--hurst-grid", exp_flags.hurst_grid, "comma-separated H values");
  experiment->add_option("--n-grid", exp_flags.n_grid, "comma-separated grid sizes");
  experiment->add_option("--step", exp_flags.step, "grid step h (horizon T = n h)");
  experiment->add_option("--horizon", exp_flags.horizon, "fixed horizon T");
  experiment->add_option("--replications", exp_flags.replications, "replications per cell");
  experiment->add_option("--seed", exp_flags.seed, "base RNG seed");
  experiment->add_option("--order", exp_flags.order, "increment order: 1 | 2");
  experiment->add_option("--beta", exp_flags.beta, "gate width parameter");
  experiment->add_option("--method", exp_flags.method, "cholesky | circulant");
  experiment->add_option("--gate-width", exp_flags.gate_width, "definition | proof");
  experiment->add_option("--out", exp_flags.out, "report CSV path");
  experiment->add_option("--threads", exp_flags.threads, "worker count (0 = hardware)");
  experiment->add_flag("--large", exp_flags.large, "allow n > 10000");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return run_gen(gen_flags);
    if (solve->parsed()) return run_solve(solve_flags, driver_file, model_name);
    if (estimate->parsed()) {
      return run_estimate(est_in, est_order, est_beta, est_no_gate, est_gate_width, est_out);
    }
    if (experiment->parsed()) return run_experiment_cmd(experiment, exp_flags);
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
