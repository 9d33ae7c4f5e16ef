#pragma once

// Fractional Gaussian noise (unit variance increments) and fractional
// Brownian motion: covariances, spectral density and exact simulation.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <vector>

namespace fracequiv {

using Rng = std::mt19937_64;

/// gamma(k) = (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}) / 2, with gamma(0) = 1.
double fgn_autocov(double H, long k);

/// (gamma(0), ..., gamma(n-1)).
std::vector<double> fgn_autocov_row(double H, std::size_t n);

/// Cov(B_s, B_t) = (|t|^{2H} + |s|^{2H} - |t-s|^{2H}) / 2.
double fbm_cov(double H, double s, double t);

/// Number of aliasing terms |j| <= kSpectralTerms kept explicitly.
inline constexpr int kSpectralTerms = 200;

/// Spectral density normalised so that gamma(k) = (1/pi) int_0^pi f(x) cos(kx) dx:
///   f(x) = 2 sin(pi H) Gamma(2H+1) (1 - cos x) sum_j |x + 2 pi j|^{-1-2H}.
/// Defined on [1e-8, pi]; throws std::domain_error outside.
double fgn_spectral_density(double H, double lambda);

enum class FgnMethod { automatic, circulant, cholesky };

/// Exact sampler for n consecutive fGN values. Setup (circulant eigenvalues
/// or the Cholesky factor) is done once; draw() is const and thread-safe.
class FgnSampler {
 public:
  FgnSampler(double H, std::size_t n, FgnMethod method = FgnMethod::automatic);
  ~FgnSampler();
  FgnSampler(FgnSampler&&) noexcept;
  FgnSampler& operator=(FgnSampler&&) noexcept;

  std::vector<double> draw(Rng& rng) const;

  double hurst() const noexcept { return H_; }
  std::size_t size() const noexcept { return n_; }
  FgnMethod method() const noexcept { return method_; }
  /// Smallest circulant embedding eigenvalue (NaN when not computed).
  double min_embedding_eigenvalue() const noexcept { return min_eig_; }

 private:
  struct Impl;
  double H_;
  std::size_t n_;
  FgnMethod method_;
  double min_eig_;
  std::unique_ptr<Impl> impl_;
};

/// Generator seeded deterministically from a 64-bit seed.
Rng make_rng(std::uint64_t seed);

/// One exact fGN draw of length n; identical seeds give identical vectors.
std::vector<double> simulate_fgn(double H, std::size_t n, std::uint64_t seed,
                                 FgnMethod method = FgnMethod::automatic);

/// Partial sums S_k = sum_{j<=k} x_j.
std::vector<double> fbm_from_fgn(std::span<const double> fgn);

}  // namespace fracequiv
