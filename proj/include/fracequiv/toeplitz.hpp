#pragma once

// Symmetric positive definite Toeplitz covariances: Levinson solves,
// eigenvalue bounds from the fGN spectral density, and Gaussian KL
// divergences between mean shifts.

#include <cstddef>
#include <span>
#include <vector>

namespace fracequiv {

/// First row (gamma(0), ..., gamma(n-1)) of a symmetric Toeplitz covariance.
/// Construction verifies positive definiteness via the Durbin reflection
/// coefficients (|kappa| < 1 - kSingularMargin throughout).
class ToeplitzCov {
 public:
  explicit ToeplitzCov(std::vector<double> first_row);

  /// fGN covariance of n consecutive observations.
  static ToeplitzCov fgn(double H, std::size_t n);

  std::size_t size() const noexcept { return row_.size(); }
  const std::vector<double>& first_row() const noexcept { return row_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return row_[i > j ? i - j : j - i]; }

  /// y = T x.
  std::vector<double> multiply(std::span<const double> x) const;

 private:
  std::vector<double> row_;
};

inline constexpr double kSingularMargin = 1e-12;

/// Solves T x = b by the Levinson recursion. Throws NumericError when a
/// reflection coefficient reaches 1 - kSingularMargin in magnitude or the
/// residual exceeds 1e-8 ||b||.
std::vector<double> toeplitz_solve(const ToeplitzCov& cov, std::span<const double> b);

/// Dense Cholesky reference solve (n <= 1024).
std::vector<double> toeplitz_solve_dense(const ToeplitzCov& cov, std::span<const double> b);

struct EigenExtremes {
  double min;
  double max;
};

/// Extreme eigenvalues from a dense symmetric eigensolve.
EigenExtremes dense_eigen_extremes(const ToeplitzCov& cov);

/// (1 - 1/pi) inf_{x in [1/n, pi]} f_H(x).
double eig_lower_bound(double H, std::size_t n);

/// sup_{x in [1/n, pi]} f_H(x) + (n/pi) int_0^{1/n} f_H(x) dx.
double eig_upper_bound(double H, std::size_t n);

/// Infimum / supremum of f_H on [1/n, pi]: a 10^4-point grid (log-spaced
/// near 1/n, linear elsewhere) refined by golden-section search.
double spectral_inf(double H, std::size_t n);
double spectral_sup(double H, std::size_t n);

/// int_0^{upper} f_H(x) dx with the x^{1-2H} endpoint behaviour absorbed
/// into a Gauss-Jacobi weight.
double spectral_integral_near_zero(double H, double upper);

struct MeanShiftPair {
  std::vector<double> v;
  std::vector<double> w;

  MeanShiftPair(std::vector<double> v_, std::vector<double> w_);
  std::size_t size() const noexcept { return v.size(); }
  std::vector<double> difference() const;
};

/// (v - w)^T Sigma^{-1} (v - w) / 2.
double kl_gaussian_shift(const ToeplitzCov& cov, const MeanShiftPair& pair);

struct KlBound {
  double exact;
  double bound_shape;  // (n^{1-2H} v 1) ||v - w||^2, no constant
};

KlBound kl_fgn_shift_bound(double H, std::size_t n, const MeanShiftPair& pair);

}  // namespace fracequiv
