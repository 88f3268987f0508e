#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "fbmlab/errors.hpp"
#include "fbmlab/rng.hpp"

namespace fbmlab::fbm {

// Hurst index, restricted to (0, 1).
class HurstIndex {
 public:
  explicit HurstIndex(double value);
  double value() const noexcept { return value_; }
  // True when the pathwise SDE theory applies (H > 1/2).
  bool suits_sde() const noexcept { return value_ > 0.5; }

 private:
  double value_;
};

// Uniform grid t_k = k T / n on [0, T].
class UniformGrid {
 public:
  UniformGrid(std::size_t n, double horizon);
  std::size_t n() const noexcept { return n_; }
  double horizon() const noexcept { return horizon_; }
  double step() const noexcept { return horizon_ / static_cast<double>(n_); }
  double point(std::size_t k) const;        // t_k for k in [0, n]
  std::size_t index_below(double t) const;  // r(t) = floor(t n / T), t in [0, T]
  double last_point_before(double t) const; // t_{r(t)}
  bool operator==(const UniformGrid& other) const noexcept;

 private:
  std::size_t n_;
  double horizon_;
};

// Values on the nodes of a uniform grid; values[0] is the time-0 value.
class SamplePath {
 public:
  SamplePath(const UniformGrid& grid, std::vector<double> values);
  const UniformGrid& grid() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double value(std::size_t k) const;
  std::size_t size() const noexcept { return values_.size(); }

 private:
  UniformGrid grid_;
  std::vector<double> values_;
};

enum class GeneratorMethod { kCholesky, kCirculant };

GeneratorMethod parse_generator_method(const std::string& name);
std::string to_string(GeneratorMethod method);

struct GeneratorOptions {
  std::size_t cholesky_cap = 4096;      // dense method size cap
  double eigenvalue_tolerance = 1e-10;  // relative clamp threshold for embedding eigenvalues
  int max_embedding_doublings = 5;      // retry budget before EmbeddingError
};

// Covariance of fractional Brownian motion at times s, t >= 0.
double fbm_covariance(double s, double t, HurstIndex h);

// Autocovariance of step increments at the given lag:
// 0.5 h^{2H} (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}) with h the step.
double increment_autocovariance(std::size_t lag, HurstIndex h, double step);

// Covariance of the order-i increments at 1-based positions j, k on the n-grid
// over [0, horizon], expanded bilinearly from fbm_covariance.
// Order 1 uses B_j - B_{j-1}; order 2 uses B_{j+1} - 2 B_j + B_{j-1}.
double second_order_increment_covariance(std::size_t j, std::size_t k, std::size_t n,
                                         double horizon, HurstIndex h, int order);

// Largest eigenvalue of the n^{2H-1}-scaled covariance matrix of the order-i
// increments (matrix size n - order + 1).
double max_increment_eigenvalue(std::size_t n, double horizon, HurstIndex h, int order,
                                const GeneratorOptions& options = {});

// Reusable exact sampler.  Precomputes the dense Cholesky factor or the
// circulant embedding spectrum and FFT plan once per (grid, H, method).
// sample() is deterministic given the stream state but holds scratch buffers,
// so use one generator per thread.
class FbmGenerator {
 public:
  FbmGenerator(const UniformGrid& grid, HurstIndex h, GeneratorMethod method,
               const GeneratorOptions& options = {});
  ~FbmGenerator();
  FbmGenerator(const FbmGenerator&) = delete;
  FbmGenerator& operator=(const FbmGenerator&) = delete;

  SamplePath sample(RngStream& stream);
  const UniformGrid& grid() const noexcept;
  GeneratorMethod method() const noexcept;
  // Circulant embedding size actually used (0 for the Cholesky method).
  std::size_t embedding_size() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// One-shot convenience wrapper: same output as sampling a fresh generator
// with the stream RngStream::for_seed(seed).
SamplePath generate_fbm(const UniformGrid& grid, HurstIndex h, std::uint64_t seed,
                        GeneratorMethod method = GeneratorMethod::kCirculant,
                        const GeneratorOptions& options = {});

}  // namespace fbmlab::fbm

namespace fbmlab {
using fbm::HurstIndex;
using fbm::SamplePath;
using fbm::UniformGrid;
}  // namespace fbmlab
