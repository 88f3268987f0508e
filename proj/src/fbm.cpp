#include "fbmlab/fbm.hpp"

#include <fftw3.h>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <sstream>

namespace fbmlab::fbm {

namespace {

// FFTW's planner (and alloc/destroy) is not thread-safe; only execute is.
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

long double cov_ld(long double s, long double t, long double e) {
  return 0.5L * (std::pow(s, e) + std::pow(t, e) - std::pow(std::abs(t - s), e));
}

// DCT-I of the half row gives the circulant eigenvalues
// lambda_k = c_0 + (-1)^k c_{m/2} + 2 sum_{j=1}^{m/2-1} c_j cos(2 pi j k / m).
// Returns false when some eigenvalue is below -tolerance * max(lambda), in
// which case the caller doubles m; mild negative roundoff is clamped to zero.
bool embedding_amplitudes(HurstIndex h, double step, double tolerance, std::size_t m,
                          std::vector<double>& amplitude) {
  const std::size_t half = m / 2;
  std::vector<double> row(half + 1);
  std::vector<double> lambda(half + 1);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan = fftw_plan_r2r_1d(static_cast<int>(half + 1), row.data(), lambda.data(),
                            FFTW_REDFT00, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw FactorizationError("FFTW plan creation failed");
  for (std::size_t k = 0; k <= half; ++k) {
    row[k] = increment_autocovariance(k, h, step);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
  double max_lambda = 0.0;
  for (double v : lambda) max_lambda = std::max(max_lambda, v);
  if (!(max_lambda > 0.0)) return false;
  const double floor = -tolerance * max_lambda;
  for (double& v : lambda) {
    if (v < floor) return false;
    if (v < 0.0) v = 0.0;
  }
  amplitude.resize(half + 1);
  const double dm = static_cast<double>(m);
  for (std::size_t k = 0; k <= half; ++k) {
    const double denom = (k == 0 || k == half) ? dm : 2.0 * dm;
    amplitude[k] = std::sqrt(lambda[k] / denom);
  }
  return true;
}

}  // namespace

HurstIndex::HurstIndex(double value) : value_(value) {
  if (!(value > 0.0) || !(value < 1.0)) {
    std::ostringstream msg;
    msg << "Hurst index must lie in (0, 1), got " << value;
    throw DomainError(msg.str());
  }
}

UniformGrid::UniformGrid(std::size_t n, double horizon) : n_(n), horizon_(horizon) {
  if (n_ == 0) throw DomainError("grid needs at least one step");
  if (!(horizon_ > 0.0)) throw DomainError("grid horizon must be positive");
}

double UniformGrid::point(std::size_t k) const {
  if (k > n_) throw DomainError("grid point index out of range");
  if (k == n_) return horizon_;
  return horizon_ * static_cast<double>(k) / static_cast<double>(n_);
}

std::size_t UniformGrid::index_below(double t) const {
  if (!(t >= 0.0) || t > horizon_) throw DomainError("time outside [0, T]");
  if (t == horizon_) return n_;
  const double r = std::floor(t * static_cast<double>(n_) / horizon_);
  return std::min(static_cast<std::size_t>(r), n_);
}

double UniformGrid::last_point_before(double t) const { return point(index_below(t)); }

bool UniformGrid::operator==(const UniformGrid& other) const noexcept {
  return n_ == other.n_ && horizon_ == other.horizon_;
}

SamplePath::SamplePath(const UniformGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.n() + 1) {
    std::ostringstream msg;
    msg << "sample path needs " << grid_.n() + 1 << " values, got " << values_.size();
    throw DomainError(msg.str());
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("sample path values must be finite");
  }
}

double SamplePath::value(std::size_t k) const {
  if (k >= values_.size()) throw DomainError("path index out of range");
  return values_[k];
}

GeneratorMethod parse_generator_method(const std::string& name) {
  if (name == "cholesky") return GeneratorMethod::kCholesky;
  if (name == "circulant") return GeneratorMethod::kCirculant;
  throw ConfigError("unknown generator method '" + name + "' (expected cholesky or circulant)");
}

std::string to_string(GeneratorMethod method) {
  return method == GeneratorMethod::kCholesky ? "cholesky" : "circulant";
}

double fbm_covariance(double s, double t, HurstIndex h) {
  if (!(s >= 0.0) || !(t >= 0.0)) throw DomainError("fbm_covariance needs s, t >= 0");
  const double e = 2.0 * h.value();
  return 0.5 * (std::pow(s, e) + std::pow(t, e) - std::pow(std::abs(t - s), e));
}

double increment_autocovariance(std::size_t lag, HurstIndex h, double step) {
  if (!(step > 0.0)) throw DomainError("increment_autocovariance needs step > 0");
  const double e = 2.0 * h.value();
  const double k = static_cast<double>(lag);
  const double shape =
      0.5 * (std::pow(k + 1.0, e) - 2.0 * std::pow(k, e) + std::pow(std::abs(k - 1.0), e));
  return shape * std::pow(step, e);
}

double second_order_increment_covariance(std::size_t j, std::size_t k, std::size_t n,
                                         double horizon, HurstIndex h, int order) {
  if (order != 1 && order != 2) throw DomainError("increment order must be 1 or 2");
  if (n == 0) throw DomainError("grid size must be positive");
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
  const std::size_t hi = n - static_cast<std::size_t>(order - 1);
  if (j < 1 || j > hi || k < 1 || k > hi) throw DomainError("increment index out of range");
  if (j > k) std::swap(j, k);  // exact symmetry by construction
  const long double e = 2.0L * static_cast<long double>(h.value());
  const long double span = static_cast<long double>(horizon);
  auto node = [&](std::size_t idx) {
    return span * static_cast<long double>(idx) / static_cast<long double>(n);
  };
  long double acc = 0.0L;
  if (order == 1) {
    acc = cov_ld(node(j), node(k), e) - cov_ld(node(j), node(k - 1), e) -
          cov_ld(node(j - 1), node(k), e) + cov_ld(node(j - 1), node(k - 1), e);
  } else {
    const long double w[3] = {1.0L, -2.0L, 1.0L};
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        acc += w[a] * w[b] * cov_ld(node(j - 1 + a), node(k - 1 + b), e);
      }
    }
  }
  return static_cast<double>(acc);
}

double max_increment_eigenvalue(std::size_t n, double horizon, HurstIndex h, int order,
                                const GeneratorOptions& options) {
  if (order != 1 && order != 2) throw DomainError("increment order must be 1 or 2");
  if (n < static_cast<std::size_t>(order)) throw DomainError("grid too small for the order");
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
  const std::size_t m = n - static_cast<std::size_t>(order - 1);
  if (m > options.cholesky_cap) {
    std::ostringstream msg;
    msg << "dense eigensolve size " << m << " exceeds the cap " << options.cholesky_cap;
    throw CapacityError(msg.str());
  }
  const double scale = std::pow(static_cast<double>(n), 2.0 * h.value() - 1.0);
  Eigen::MatrixXd d(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      const double v = scale * second_order_increment_covariance(a + 1, b + 1, n, horizon, h, order);
      d(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = v;
      d(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = v;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(d, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw FactorizationError("dense eigensolve failed");
  return solver.eigenvalues().maxCoeff();
}

struct FbmGenerator::Impl {
  UniformGrid grid;
  HurstIndex h;
  GeneratorMethod method;
  GeneratorOptions options;

  // dense method
  Eigen::MatrixXd chol_lower;
  Eigen::VectorXd z_scratch;

  // circulant method
  std::size_t m = 0;
  std::vector<double> amplitude;  // sqrt(lambda_k / m) at k = 0, m/2; sqrt(lambda_k / 2m) else
  fftw_complex* spectrum = nullptr;
  double* synth = nullptr;
  fftw_plan plan = nullptr;

  Impl(const UniformGrid& g, HurstIndex hh, GeneratorMethod me, const GeneratorOptions& op)
      : grid(g), h(hh), method(me), options(op) {}

  ~Impl() {
    if (plan != nullptr || spectrum != nullptr || synth != nullptr) {
      std::lock_guard<std::mutex> lock(fftw_mutex());
      if (plan != nullptr) fftw_destroy_plan(plan);
      if (spectrum != nullptr) fftw_free(spectrum);
      if (synth != nullptr) fftw_free(synth);
    }
  }
};

FbmGenerator::FbmGenerator(const UniformGrid& grid, HurstIndex h, GeneratorMethod method,
                           const GeneratorOptions& options)
    : impl_(std::make_unique<Impl>(grid, h, method, options)) {
  const std::size_t n = grid.n();
  if (method == GeneratorMethod::kCholesky) {
    if (n > options.cholesky_cap) {
      std::ostringstream msg;
      msg << "cholesky generator: n = " << n << " exceeds the dense cap "
          << options.cholesky_cap << "; use the circulant method";
      throw CapacityError(msg.str());
    }
    Eigen::MatrixXd cov(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        const double v = increment_autocovariance(i - j, h, grid.step());
        cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        cov(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
      }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
      throw FactorizationError("cholesky generator: increment covariance is not positive definite");
    }
    impl_->chol_lower = llt.matrixL();
    impl_->z_scratch.resize(static_cast<Eigen::Index>(n));
  } else {
    std::size_t m = std::bit_ceil(2 * n);
    bool ok = false;
    for (int attempt = 0; attempt <= options.max_embedding_doublings; ++attempt) {
      if (m > (std::size_t{1} << 30)) break;
      if (embedding_amplitudes(h, grid.step(), options.eigenvalue_tolerance, m,
                               impl_->amplitude)) {
        ok = true;
        break;
      }
      m *= 2;
    }
    if (!ok) {
      std::ostringstream msg;
      msg << "circulant embedding stayed indefinite after " << options.max_embedding_doublings
          << " doublings (last size " << m << ")";
      throw EmbeddingError(msg.str());
    }
    impl_->m = m;
    const std::size_t half = m / 2;
    std::lock_guard<std::mutex> lock(fftw_mutex());
    impl_->spectrum = fftw_alloc_complex(half + 1);
    impl_->synth = fftw_alloc_real(m);
    if (impl_->spectrum == nullptr || impl_->synth == nullptr) {
      throw FactorizationError("FFTW buffer allocation failed");
    }
    impl_->plan = fftw_plan_dft_c2r_1d(static_cast<int>(m), impl_->spectrum, impl_->synth,
                                       FFTW_ESTIMATE);
    if (impl_->plan == nullptr) throw FactorizationError("FFTW plan creation failed");
  }
}

FbmGenerator::~FbmGenerator() = default;

const UniformGrid& FbmGenerator::grid() const noexcept { return impl_->grid; }

GeneratorMethod FbmGenerator::method() const noexcept { return impl_->method; }

std::size_t FbmGenerator::embedding_size() const noexcept { return impl_->m; }

SamplePath FbmGenerator::sample(RngStream& stream) {
  const std::size_t n = impl_->grid.n();
  std::vector<double> values(n + 1);
  values[0] = 0.0;
  if (impl_->method == GeneratorMethod::kCholesky) {
    for (std::size_t i = 0; i < n; ++i) {
      impl_->z_scratch[static_cast<Eigen::Index>(i)] = stream.normal();
    }
    Eigen::VectorXd inc =
        impl_->chol_lower.triangularView<Eigen::Lower>() * impl_->z_scratch;
    for (std::size_t i = 0; i < n; ++i) {
      values[i + 1] = values[i] + inc[static_cast<Eigen::Index>(i)];
    }
  } else {
    // Draw order is fixed: k = 0, then k = 1..m/2-1 (real part before
    // imaginary part), then k = m/2.  Changing it breaks reproducibility.
    const std::size_t half = impl_->m / 2;
    fftw_complex* spec = impl_->spectrum;
    spec[0][0] = impl_->amplitude[0] * stream.normal();
    spec[0][1] = 0.0;
    for (std::size_t k = 1; k < half; ++k) {
      spec[k][0] = impl_->amplitude[k] * stream.normal();
      spec[k][1] = impl_->amplitude[k] * stream.normal();
    }
    spec[half][0] = impl_->amplitude[half] * stream.normal();
    spec[half][1] = 0.0;
    fftw_execute(impl_->plan);
    for (std::size_t i = 0; i < n; ++i) {
      values[i + 1] = values[i] + impl_->synth[i];
    }
  }
  return SamplePath(impl_->grid, std::move(values));
}

SamplePath generate_fbm(const UniformGrid& grid, HurstIndex h, std::uint64_t seed,
                        GeneratorMethod method, const GeneratorOptions& options) {
  FbmGenerator generator(grid, h, method, options);
  RngStream stream = RngStream::for_seed(seed);
  return generator.sample(stream);
}

}  // namespace fbmlab::fbm
