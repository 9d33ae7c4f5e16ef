#pragma once

// Nonharmonic Fourier basis e^{2 i omega_k t} built on the zeros of
// J_{1-H}, its biorthogonal partner (g_k), the spectral ONB (phi_k) and the
// RKHS of fractional Brownian motion expressed in these coordinates.
//
// Conventions: F(h)(x) = int h(u) e^{-i x u} du, so that
// int_0^t e^{2 i omega u} du = conj(F(1_[0,t])(2 omega)); inner products are
// <u, v> = int u conj(v).

#include "fracequiv/specfun.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fracequiv {

using cplx = std::complex<double>;

/// c_H = sin(pi H) Gamma(2H+1) and c'_H (separate value at k = 0).
struct HurstConfig {
  double H;
  double c_H;
  double c_prime_0;
  double c_prime_k;

  static HurstConfig make(double H);
  double c_prime(long k) const noexcept { return k == 0 ? c_prime_0 : c_prime_k; }
};

/// Closed-form right-hand side 2^{4H-3} H Gamma(H+1/2) Gamma(3-2H) /
/// ((1-H) Gamma(1-H)^2 Gamma(3/2-H)); equals c_H / (2 pi).
double c_h_identity_rhs(double H);

/// Frequencies omega_k, positive coefficients a_k (a_{-k} = a_k), the sign of
/// a_k^{-1} = phi_k(2 omega_k) and noise scalings sigma_0 = a_0,
/// sigma_k = a_k / sqrt(2).
class BasisTable {
 public:
  BasisTable(HurstConfig config, ZeroTable zeros, std::vector<double> a, std::vector<int> sign);

  const HurstConfig& config() const noexcept { return config_; }
  double hurst() const noexcept { return config_.H; }
  std::size_t K() const noexcept { return zeros_.size(); }
  const ZeroTable& zeros() const noexcept { return zeros_; }

  double omega(long k) const { return zeros_.omega(k); }
  double a(long k) const;
  int sign(long k) const;
  double signed_a(long k) const { return sign(k) * a(k); }
  double sigma(long k) const;
  const std::vector<double>& a_values() const noexcept { return a_; }

  /// Copy with every a_k multiplied by (1 + relative); fault injection only.
  BasisTable with_perturbed_a(double relative) const;

 private:
  HurstConfig config_;
  ZeroTable zeros_;
  std::vector<double> a_;
  std::vector<int> sign_;
};

/// a_0^{-1} = sqrt(pi/c_H) sqrt(1-H) 2^{2H-3/2} / Gamma(2-H);
/// a_k^{-1} = sqrt(pi/c_H) 2^{H-1} omega_k^H J'_{1-H}(omega_k).
BasisTable build_basis_table(double H, std::size_t K);

/// phi_k at the point `two_lambda` (= 2 lambda), evaluated from Bessel
/// functions; the removable singularity at lambda = omega_k is filled by the
/// limit, and lambda < 0 uses the odd extension of lambda^H J_{1-H}(lambda).
cplx phi_k(const BasisTable& table, long k, double two_lambda);

struct NormEstimate {
  double value;  // includes the tail estimate
  double tail;
};

/// ||phi_k||^2 in L^2(mu), mu(dx) = c_H/(2 pi) |x|^{1-2H} dx, by panelled
/// quadrature on |lambda| <= cutoff (default 50 omega_K) plus an analytic tail.
NormEstimate phi_norm_sq(const BasisTable& table, long k, double cutoff = 0.0);

/// g_k(s) = (s-s^2)^{1/2-H} + 2 i omega_k e^{2 i omega_k s} int_0^s e^{-2 i omega_k u} (u-u^2)^{1/2-H} du.
cplx g_k_eval(const BasisTable& table, long k, double s, std::size_t nodes = 256);

/// M[k][l] = < a_k e^{i omega_k} g_k / c'_H , e^{2 i omega_l .} >, rows and
/// columns indexed by k + kmax. Uses Gauss-Jacobi quadrature of the weight's
/// Fourier transform. jobs == 1 is the serial reference.
Eigen::MatrixXcd biorth_matrix(const BasisTable& table, std::size_t kmax, std::size_t nodes = 256, int jobs = 1);

/// Coefficients theta_{-K..K} of f = sum theta_k e^{2 i omega_k t}, real-valued when theta_{-k} = conj(theta_k).
class NonharmonicSeries {
 public:
  /// Zero series with frequencies omega_0..omega_K taken from the table.
  NonharmonicSeries(const BasisTable& table, std::size_t K);

  std::size_t K() const noexcept { return omegas_.size() - 1; }
  double omega(long k) const;
  cplx theta(long k) const;
  /// Sets theta_k and theta_{-k} = conj(theta_k); theta_0 must be real.
  void set(long k, cplx value);

  /// sum_k theta_k e^{2 i omega_k t}.
  cplx evaluate(double t) const;
  /// sum_k (1+|k|)^{2 alpha} |theta_k|^2.
  double sobolev_norm_sq(double alpha) const;
  bool in_ball(double alpha, double C) const { return sobolev_norm_sq(alpha) <= C * C; }
  /// max_k |theta_{-k} - conj(theta_k)|.
  double symmetry_defect() const;

  NonharmonicSeries operator-(const NonharmonicSeries& other) const;
  NonharmonicSeries operator+(const NonharmonicSeries& other) const;
  NonharmonicSeries scaled(double factor) const;

 private:
  std::size_t index(long k) const;
  std::vector<double> omegas_;
  std::vector<cplx> theta_;  // index k + K
};

class QuadratureError : public NumericError {
 public:
  QuadratureError(const std::string& what, long k) : NumericError(what), k_(k) {}
  long k() const noexcept { return k_; }

 private:
  long k_;
};

struct AnalyzeOptions {
  std::size_t nodes = 256;
  double tolerance = 1e-8;  // agreement required between `nodes` and `2 * nodes`
  int jobs = 1;
};

/// theta_k = a_k e^{-i omega_k} <f, g_k> / c'_H for |k| <= K, then
/// symmetrised by averaging theta_k with conj(theta_{-k}).
NonharmonicSeries analyze(const std::function<double(double)>& f, const BasisTable& table, std::size_t K,
                          const AnalyzeOptions& options = {});

class SymmetryError : public NumericError {
 public:
  using NumericError::NumericError;
};

inline constexpr double kImaginaryResidue = 1e-10;

/// Real values of the series on a grid; throws SymmetryError when the
/// imaginary part exceeds kImaginaryResidue (scaled by sum |theta_k|).
std::vector<double> synthesize(const NonharmonicSeries& series, std::span<const double> t);

/// F(1_[0,t])(x) = (1 - e^{-i x t}) / (i x), equal to t at x = 0.
cplx fourier_indicator(double t, double x);

/// F(t) = sum_k theta_k conj(F(1_[0,t])(2 omega_k)) = int_0^t f(u) du.
struct RkhsElement {
  NonharmonicSeries series;
  double operator()(double t) const;
};

/// ||F||_H^2 = sum_k |theta_k|^2 / a_k^2.
double rkhs_norm_sq(const RkhsElement& elem, const BasisTable& table);

/// KL between the continuous-observation laws: ||f - g||_H^2 / (2 noise^2).
double kl_rkhs(const RkhsElement& f, const RkhsElement& g, double noise_level, const BasisTable& table);

/// a_0^2 s t + sum_{1<=k<=K} 2 a_k^2 Re[F(1_s)(2 omega_k) conj(F(1_t)(2 omega_k))]; K = 0 means the whole table.
double kernel_parseval_check(const BasisTable& table, double s, double t, std::size_t K = 0);

/// Tail estimate sum_{k>K} 2 a_k^2 / omega_k^2 using a_k^2 ~ a_K^2 (k/K)^{1-2H}.
double kernel_tail_bound(const BasisTable& table, std::size_t K = 0);

/// kernel_parseval_check on the product grid s x t (row-major).
std::vector<double> kernel_parseval_grid(const BasisTable& table, std::span<const double> s,
                                         std::span<const double> t, std::size_t K = 0, int jobs = 1);

/// Gram matrix G[k][l] = int_0^1 e^{2 i (omega_k - omega_l) t} dt for |k|,|l| <= K.
Eigen::MatrixXcd gram_matrix(const BasisTable& table, std::size_t K);

/// ||sum theta_k e^{2 i omega_k .}||^2_{L^2[0,1]} via the Gram matrix.
double l2_norm_sq(const NonharmonicSeries& series);

struct FrameBounds {
  double lower;
  double upper;
};

/// Extreme eigenvalues of gram_matrix: the Riesz constants of the truncated system.
FrameBounds riesz_bounds(const BasisTable& table, std::size_t K);

}  // namespace fracequiv
