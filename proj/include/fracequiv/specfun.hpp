#pragma once

// Real-order special functions: Gamma, Bessel J_nu for nu in (-1, 2), and the
// positive zeros of J_{1-H}.

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fracequiv {

/// Raised when a special-function evaluation or root bracket is inconsistent.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Validates a Hurst index; throws std::domain_error unless 0 < H < 1.
double checked_hurst(double H);

/// Gamma function for x > 0.
double gamma_fn(double x);

/// Order of a Bessel function of the first kind, restricted to (-1, 2).
class BesselOrder {
 public:
  explicit BesselOrder(double nu);
  double nu() const noexcept { return nu_; }

 private:
  double nu_;
};

/// Arguments above this value use the Hankel expansion; below it the
/// ascending series (evaluated in long double).
inline constexpr double kBesselCrossover = 15.0;

/// J_nu(lambda) for lambda >= 0. For nu < 0 the function is singular at 0
/// and lambda = 0 is rejected.
double bessel_j(BesselOrder order, double lambda);

/// The two branches used by bessel_j, exposed for overlap testing.
double bessel_j_series(BesselOrder order, double lambda);
double bessel_j_hankel(BesselOrder order, double lambda);

/// dJ_nu/dlambda = (J_{nu-1} - J_{nu+1}) / 2, for nu in (0, 1) and lambda > 0.
double bessel_j_prime(BesselOrder order, double lambda);

/// The positive zeros omega_1 < ... < omega_K of J_{1-H}.
///
/// omega(0) == 0 and omega(-k) == -omega(k); only the positive side is stored.
class ZeroTable {
 public:
  ZeroTable(double H, std::vector<double> positive_zeros);

  double hurst() const noexcept { return H_; }
  std::size_t size() const noexcept { return omegas_.size(); }
  const std::vector<double>& positive() const noexcept { return omegas_; }

  /// Signed access, |k| <= size().
  double omega(long k) const;

  /// Kadec band half-width max(1/8, |1-2H|/4).
  static double kadec_halfwidth(double H);

 private:
  double H_;
  std::vector<double> omegas_;
};

inline constexpr double kZeroTolerance = 1e-12;

/// Positive zeros of J_{1-H}: bisection on the Kadec band around k*pi to a
/// bracket width of kZeroTolerance, followed by one Newton step. Throws
/// NumericError if a bracket does not change sign.
ZeroTable bessel_zeros(double H, std::size_t K);

}  // namespace fracequiv
