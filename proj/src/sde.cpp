#include "fbmlab/sde.hpp"

#include <cmath>
#include <sstream>

namespace fbmlab::sde {

void check_diffusion_derivative(const SdeModel& model, const std::vector<double>& probes) {
  if (!model.drift || !model.diffusion) {
    throw DomainError("model needs drift and diffusion functions");
  }
  if (!model.diffusion_derivative) return;
  const double eps = 1e-6;
  for (double x : probes) {
    const double numeric = (model.diffusion(x + eps) - model.diffusion(x - eps)) / (2.0 * eps);
    const double stated = model.diffusion_derivative(x);
    if (!(std::abs(stated - numeric) <= 1e-4)) {
      std::ostringstream msg;
      msg << "diffusion derivative mismatch at x = " << x << ": stated " << stated
          << ", centered difference " << numeric;
      throw DomainError(msg.str());
    }
  }
}

SdeModel fou_model() {
  SdeModel model;
  model.drift = [](double x) { return -x; };
  model.diffusion = [](double) { return 1.0; };
  model.diffusion_derivative = [](double) { return 0.0; };
  model.initial_value = 0.0;
  model.note = "fractional Ornstein-Uhlenbeck: linear drift is globally Lipschitz, "
               "constant diffusion is C^1 with bounded derivative";
  return model;
}

SamplePath euler_solve(const SdeModel& model, const SamplePath& driver) {
  if (!model.drift || !model.diffusion) {
    throw DomainError("model needs drift and diffusion functions");
  }
  const UniformGrid& grid = driver.grid();
  const std::size_t n = grid.n();
  const double h = grid.step();
  const std::vector<double>& b = driver.values();
  std::vector<double> x(n + 1);
  x[0] = model.initial_value;
  for (std::size_t k = 0; k < n; ++k) {
    const double next =
        x[k] + model.drift(x[k]) * h + model.diffusion(x[k]) * (b[k + 1] - b[k]);
    if (!std::isfinite(next)) {
      std::ostringstream msg;
      msg << "Euler state became non-finite at step " << k + 1 << " of " << n;
      throw IntegrationError(msg.str(), k + 1);
    }
    x[k + 1] = next;
  }
  return SamplePath(grid, std::move(x));
}

SamplePath fou_solve(const SamplePath& driver) { return euler_solve(fou_model(), driver); }

SamplePath subsample(const SamplePath& path, std::size_t factor) {
  const std::size_t n = path.grid().n();
  if (factor == 0) throw DomainError("subsample factor must be positive");
  if (n % factor != 0) {
    std::ostringstream msg;
    msg << "subsample factor " << factor << " does not divide the grid size " << n;
    throw DomainError(msg.str());
  }
  const std::size_t coarse_n = n / factor;
  std::vector<double> values(coarse_n + 1);
  for (std::size_t k = 0; k <= coarse_n; ++k) {
    values[k] = path.value(k * factor);
  }
  return SamplePath(UniformGrid(coarse_n, path.grid().horizon()), std::move(values));
}

}  // namespace fbmlab::sde
