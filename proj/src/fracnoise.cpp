#include "fracequiv/fracnoise.hpp"

#include "fracequiv/parallel.hpp"
#include "fracequiv/specfun.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <fftw3.h>

#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace fracequiv {

double fgn_autocov(double H, long k) {
  checked_hurst(H);
  const double m = std::fabs(static_cast<double>(k));
  if (m == 0.0) return 1.0;
  const double h2 = 2.0 * H;
  if (m == 1.0) return 0.5 * (std::pow(2.0, h2) - 2.0);
  // (1 +- 1/m)^{2H} - 1 via expm1/log1p keeps the second difference accurate at large lags
  const double x = 1.0 / m;
  return 0.5 * std::pow(m, h2) * (std::expm1(h2 * std::log1p(x)) + std::expm1(h2 * std::log1p(-x)));
}

std::vector<double> fgn_autocov_row(double H, std::size_t n) {
  std::vector<double> row(n);
  for (std::size_t k = 0; k < n; ++k) row[k] = fgn_autocov(H, static_cast<long>(k));
  return row;
}

double fbm_cov(double H, double s, double t) {
  checked_hurst(H);
  if (s < 0.0 || t < 0.0) throw std::domain_error("fbm_cov: times must be nonnegative");
  const double h2 = 2.0 * H;
  return 0.5 * (std::pow(t, h2) + std::pow(s, h2) - std::pow(std::fabs(t - s), h2));
}

double fgn_spectral_density(double H, double lambda) {
  checked_hurst(H);
  if (!(lambda >= 1e-8 && lambda <= std::numbers::pi))
    throw std::domain_error("fgn_spectral_density: lambda must lie in [1e-8, pi]");
  const double e = -1.0 - 2.0 * H;
  const double two_pi = 2.0 * std::numbers::pi;
  double sum = std::pow(lambda, e);
  for (int j = 1; j <= kSpectralTerms; ++j) {
    sum += std::pow(two_pi * j + lambda, e) + std::pow(two_pi * j - lambda, e);
  }
  const double edge = two_pi * (kSpectralTerms + 0.5);
  sum += (std::pow(edge + lambda, -2.0 * H) + std::pow(edge - lambda, -2.0 * H)) / (two_pi * 2.0 * H);
  const double c_h = std::sin(std::numbers::pi * H) * std::tgamma(2.0 * H + 1.0);
  const double s = std::sin(0.5 * lambda);
  return 2.0 * c_h * (2.0 * s * s) * sum;
}

Rng make_rng(std::uint64_t seed) { return Rng(mix64(seed)); }

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct FgnSampler::Impl {
  // circulant path
  std::size_t embed = 0;
  std::vector<double> scale;  // sqrt(eigenvalue / embed)
  fftw_plan plan = nullptr;
  // cholesky path
  Eigen::MatrixXd lower;

  ~Impl() {
    if (plan) {
      std::lock_guard<std::mutex> lock(fftw_planner_mutex());
      fftw_destroy_plan(plan);
    }
  }
};

FgnSampler::FgnSampler(double H, std::size_t n, FgnMethod method)
    : H_(checked_hurst(H)), n_(n), method_(method),
      min_eig_(std::numeric_limits<double>::quiet_NaN()), impl_(std::make_unique<Impl>()) {
  if (n == 0) throw std::invalid_argument("FgnSampler: n must be positive");
  const std::vector<double> gamma = fgn_autocov_row(H, n);

  bool use_circulant = method != FgnMethod::cholesky && n >= 2;
  if (use_circulant) {
    const std::size_t m = n - 1;
    const std::size_t N = 2 * m;
    impl_->embed = N;
    fftw_complex* buf = fftw_alloc_complex(N);
    {
      std::lock_guard<std::mutex> lock(fftw_planner_mutex());
      impl_->plan = fftw_plan_dft_1d(static_cast<int>(N), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    for (std::size_t j = 0; j < N; ++j) {
      const std::size_t lag = j <= m ? j : N - j;
      buf[j][0] = gamma[lag];
      buf[j][1] = 0.0;
    }
    fftw_execute_dft(impl_->plan, buf, buf);
    impl_->scale.resize(N);
    min_eig_ = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < N; ++j) {
      const double ev = buf[j][0];
      min_eig_ = std::min(min_eig_, ev);
      impl_->scale[j] = std::sqrt(std::max(ev, 0.0) / static_cast<double>(N));
    }
    fftw_free(buf);
    if (min_eig_ < -1e-9) {
      if (method == FgnMethod::circulant)
        throw NumericError("FgnSampler: circulant embedding has a negative eigenvalue");
      use_circulant = false;
    }
  }
  if (use_circulant) {
    method_ = FgnMethod::circulant;
    return;
  }

  method_ = FgnMethod::cholesky;
  Eigen::MatrixXd cov(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = gamma[i > j ? i - j : j - i];
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) throw NumericError("FgnSampler: covariance is not positive definite");
  impl_->lower = llt.matrixL();
}

FgnSampler::~FgnSampler() = default;
FgnSampler::FgnSampler(FgnSampler&&) noexcept = default;
FgnSampler& FgnSampler::operator=(FgnSampler&&) noexcept = default;

std::vector<double> FgnSampler::draw(Rng& rng) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> out(n_);
  if (method_ == FgnMethod::circulant) {
    const std::size_t N = impl_->embed;
    std::vector<std::complex<double>> buf(N);
    for (std::size_t j = 0; j < N; ++j) {
      const double u = normal(rng);
      const double v = normal(rng);
      buf[j] = impl_->scale[j] * std::complex<double>(u, v);
    }
    auto* raw = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_execute_dft(impl_->plan, raw, raw);
    for (std::size_t i = 0; i < n_; ++i) out[i] = buf[i].real();
    return out;
  }
  Eigen::VectorXd xi(static_cast<Eigen::Index>(n_));
  for (std::size_t i = 0; i < n_; ++i) xi[static_cast<Eigen::Index>(i)] = normal(rng);
  const Eigen::VectorXd y = impl_->lower.triangularView<Eigen::Lower>() * xi;
  for (std::size_t i = 0; i < n_; ++i) out[i] = y[static_cast<Eigen::Index>(i)];
  return out;
}

std::vector<double> simulate_fgn(double H, std::size_t n, std::uint64_t seed, FgnMethod method) {
  FgnSampler sampler(H, n, method);
  Rng rng = make_rng(seed);
  return sampler.draw(rng);
}

std::vector<double> fbm_from_fgn(std::span<const double> fgn) {
  if (fgn.empty()) throw std::invalid_argument("fbm_from_fgn: input must be nonempty");
  std::vector<double> out(fgn.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < fgn.size(); ++i) {
    acc += fgn[i];
    out[i] = acc;
  }
  return out;
}

}  // namespace fracequiv
