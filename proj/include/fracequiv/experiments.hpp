#pragma once

// Experiments E1 (discrete regression under fGN) and E3 (Gaussian sequence
// model), the spectral-cutoff estimator, the interpolation operator L, the
// approximation-condition diagnostics, the separation constructions and the
// Sobolev constraint check.

#include "fracequiv/fracnoise.hpp"
#include "fracequiv/nhbasis.hpp"

#include <Eigen/Cholesky>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fracequiv {

/// A regression function given either as a callable or as a nonharmonic series.
class RegressionFunction {
 public:
  RegressionFunction(std::function<double(double)> f, bool symmetric = false);
  RegressionFunction(NonharmonicSeries series, bool symmetric = false);

  double operator()(double t) const;
  const std::optional<NonharmonicSeries>& series() const noexcept { return series_; }
  bool symmetric() const noexcept { return symmetric_; }

  /// max |f(t) + f(1-t)| on an equispaced grid of `points` values.
  double antisymmetry_defect(std::size_t points = 257) const;

  std::optional<double> alpha;
  std::optional<double> radius;

 private:
  std::function<double(double)> f_;
  std::optional<NonharmonicSeries> series_;
  bool symmetric_;
};

struct E1Sample {
  double H;
  std::size_t n;
  std::uint64_t seed;
  std::vector<double> y;  // y[i-1] = f(i/n) + N_i
};

E1Sample simulate_e1(const RegressionFunction& f, double H, std::size_t n, std::uint64_t seed);

/// Same, reusing a sampler built for (H, n) and an explicit generator.
E1Sample simulate_e1(const RegressionFunction& f, const FgnSampler& sampler, Rng& rng, std::uint64_t seed);

struct E3Sample {
  double H;
  std::size_t n;
  std::size_t K;
  std::uint64_t seed;
  std::vector<double> z;        // Z_0..Z_K
  std::vector<double> z_prime;  // Z'_0..Z'_K, Z'_0 = 0
};

/// Z_k = Re(theta_k)/sigma_k + n^{H-1} eps_k, Z'_k = Im(theta_k)/sigma_k + n^{H-1} eps'_k.
E3Sample simulate_e3(const NonharmonicSeries& theta, const BasisTable& table, std::size_t n, std::uint64_t seed);

/// KL between the E3 laws of two parameter series:
/// sum_k ((Re d_k)^2 + (Im d_k)^2 [k>0]) / (2 sigma_k^2 n^{2H-2}), d = theta - eta.
double e3_kl(const NonharmonicSeries& theta, const NonharmonicSeries& eta, const BasisTable& table, std::size_t n);

/// theta_hat_k = sigma_k (Z_k + i Z'_k) for k <= M, zero beyond.
NonharmonicSeries estimate_cutoff(const E3Sample& sample, const BasisTable& table, std::size_t M);

/// M_n = ceil(c0 n^{(1-H)/(beta+1-H)}).
std::size_t default_cutoff(double H, double beta, std::size_t n, double c0 = 1.0);

struct SlopeFit {
  double slope;
  double intercept;
  double stderr_slope;
  double ci_low;  // 95 % Student t interval
  double ci_high;
};

/// Ordinary least squares of log y on log x.
SlopeFit loglog_fit(std::span<const double> x, std::span<const double> y);

struct RiskReport {
  double H;
  double beta;
  double radius;
  std::uint64_t seed;
  std::size_t replicates;
  std::size_t truth_K;
  std::vector<std::size_t> n_grid;
  std::vector<std::size_t> cutoff;
  std::vector<double> mean_risk;
  std::vector<double> stderr_risk;
  SlopeFit fit;
  double expected_slope;  // -2 beta (1-H) / (beta + 1 - H)
  FrameBounds frame;      // Riesz constants of the truncated system at K = 50
};

struct RateOptions {
  double cutoff_const = 1.0;
  std::size_t truth_K = 4000;
  int jobs = 1;
};

/// Test function theta_k ~ (1+k)^{-beta-1/2-0.01} with random signs on the
/// sphere sum (1+|k|)^{2 beta} |theta_k|^2 = C^2; Monte Carlo coefficient risk
/// of the cutoff estimator over n_grid.
RiskReport rate_experiment(double H, double beta, double C, std::span<const std::size_t> n_grid,
                           std::size_t replicates, std::uint64_t seed, const RateOptions& options = {});

/// The seed-fixed test function used by rate_experiment.
NonharmonicSeries rate_test_function(const BasisTable& table, std::size_t K, double beta, double C,
                                     std::uint64_t seed);

/// sum_{i<n} w_i Y_i with w_i proportional to g_0(i/n) = (i/n - (i/n)^2)^{1/2-H}.
double weighted_mean_estimator(const E1Sample& sample);
std::vector<double> weighted_mean_weights(double H, std::size_t n);

struct WeightedMeanReport {
  double H;
  std::size_t n;
  std::size_t replicates;
  std::uint64_t seed;
  double var_weighted;
  double var_plain;
  double ratio;
  double exact_ratio;  // w' Sigma w / (1' Sigma 1 / n^2)
  double sigma0_sq;
};

WeightedMeanReport weighted_mean_experiment(double H, std::size_t n, std::size_t replicates, std::uint64_t seed,
                                            double theta = 0.0, int jobs = 1);

/// L(t|x) = (K(t,1/n), ..., K(t,1)) Cov(B_n)^{-1} x with K the fBM covariance.
class LInterpolator {
 public:
  LInterpolator(double H, std::size_t n);

  std::vector<double> operator()(std::span<const double> x, std::span<const double> t) const;
  /// (max L_ii / min L_ii)^2 of the Cholesky factor.
  double pivot_ratio() const noexcept { return pivot_ratio_; }
  bool ill_conditioned() const noexcept { return pivot_ratio_ > kIllConditioned; }

  static constexpr double kIllConditioned = 1e14;

 private:
  double H_;
  std::size_t n_;
  double pivot_ratio_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

/// One-shot form; prints a warning to stderr when ill-conditioned.
std::vector<double> interpolate_L(double H, std::size_t n, std::span<const double> x, std::span<const double> t);

/// (n^{1-2H} v 1) sum_i (n int_{cell i} f - f(i/n))^2, 16-point Gauss-Legendre per cell.
double condition_i_diagnostic(const RegressionFunction& f, double H, std::size_t n);

class ConsistencyError : public NumericError {
 public:
  using NumericError::NumericError;
};

struct ProjectionResidual {
  double scaled;    // n^{1-H} dist
  double distance;  // sqrt(max(0, ||F||^2 - F_n' C^{-1} F_n))
  double rkhs_norm_sq;
};

/// Distance of F_f from the span of the kernel sections at i/n, via the
/// projection identity. Throws ConsistencyError if the squared distance is
/// below -1e-8 (relative to the norm).
ProjectionResidual condition_ii_residual(const NonharmonicSeries& theta, const BasisTable& table, std::size_t n);

enum class SeparationCase { alpha_half, alpha_low };

struct SeparationReport {
  double H;
  std::size_t n;
  SeparationCase which;
  double c;
  double kl_e1;
  double e3_separation;
};

/// Pair f0, f1 that is hard to tell apart from n discrete
/// observations but separated in the sequence model. c defaults to C/2 with C = 1.
SeparationReport separation_experiment(double H, std::size_t n, SeparationCase which, const BasisTable& table,
                                       double c = 0.5);

/// Required table size for separation_experiment at n.
std::size_t separation_table_size(std::size_t n, SeparationCase which);

/// int_0^1 f^{(l)}(s) (s-s^2)^{1/2-H} ds for l = 1..beta, derivatives supplied.
std::vector<double> sobolev_constraint_check(const std::vector<std::function<double(double)>>& derivatives, double H);

/// Same with derivatives of f taken by 8th-order central differences.
std::vector<double> sobolev_constraint_check_fd(const std::function<double(double)>& f, double H, int beta);

}  // namespace fracequiv
