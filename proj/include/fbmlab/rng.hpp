#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fbmlab {

// splitmix64 finalizer, used to turn (seed, indices) into engine keys.
inline std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Deterministic Gaussian stream: mt19937_64 keyed through splitmix64,
// 53-bit uniforms, Marsaglia polar normals with a cached spare.
// The draw order is part of the reproducibility contract; do not reorder.
class RngStream {
 public:
  static RngStream from_key(std::uint64_t key) { return RngStream(key); }

  // Stream for a standalone run (CLI gen / solve).
  static RngStream for_seed(std::uint64_t seed) {
    return RngStream(splitmix64(seed));
  }

  // Replication stream: key = mix(mix(mix(mix(seed) ^ h) ^ n) ^ rep), so every
  // (Hurst index, grid size, replication) cell gets an independent stream and
  // the assignment does not depend on worker scheduling.
  static RngStream for_replication(std::uint64_t seed, std::uint64_t hurst_index,
                                   std::uint64_t n_index, std::uint64_t replication) {
    std::uint64_t k = splitmix64(seed);
    k = splitmix64(k ^ hurst_index);
    k = splitmix64(k ^ n_index);
    k = splitmix64(k ^ replication);
    return RngStream(k);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via the polar method.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

 private:
  explicit RngStream(std::uint64_t key) : engine_(key) {}

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace fbmlab
