#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fbmlab/fbm.hpp"

namespace fbmlab::sde {

// Scalar model dX = f(X) dt + g(X) dB^H, X(0) = initial_value.
// The pathwise (Young) interpretation needs H > 1/2, f Lipschitz and g in C^1
// with bounded derivative; `note` documents the assumptions for each model.
struct SdeModel {
  std::function<double(double)> drift;
  std::function<double(double)> diffusion;
  std::function<double(double)> diffusion_derivative;  // optional, may be empty
  double initial_value = 0.0;
  std::string note;
};

// Verifies diffusion_derivative against a centered difference (eps = 1e-6,
// tolerance 1e-4) at the probe points.  Throws DomainError on a mismatch or
// if drift/diffusion are missing.  No-op when the derivative is not supplied.
void check_diffusion_derivative(const SdeModel& model, const std::vector<double>& probes);

// Fractional Ornstein-Uhlenbeck benchmark: dX = -X dt + dB^H, X(0) = 0.
SdeModel fou_model();

// Euler scheme on the driver's grid:
// X_{k+1} = X_k + f(X_k) h + g(X_k) (B_{k+1} - B_k).
SamplePath euler_solve(const SdeModel& model, const SamplePath& driver);

// euler_solve with the fOU model.
SamplePath fou_solve(const SamplePath& driver);

// Keeps every factor-th node; factor must divide the grid size.
SamplePath subsample(const SamplePath& path, std::size_t factor);

}  // namespace fbmlab::sde
