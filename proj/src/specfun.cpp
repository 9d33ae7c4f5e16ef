#include "fracequiv/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace fracequiv {

double checked_hurst(double H) {
  if (!(H > 0.0 && H < 1.0))
    throw std::domain_error("Hurst index must lie in (0,1), got " + std::to_string(H));
  return H;
}

double gamma_fn(double x) {
  if (!(x > 0.0)) throw std::domain_error("gamma_fn: argument must be positive");
  return std::tgamma(x);
}

BesselOrder::BesselOrder(double nu) : nu_(nu) {
  if (!(nu > -1.0 && nu < 2.0))
    throw std::domain_error("BesselOrder: nu must lie in (-1,2), got " + std::to_string(nu));
}

double bessel_j_series(BesselOrder order, double lambda) {
  const long double nu = order.nu();
  const long double x = lambda;
  if (lambda == 0.0) {
    if (nu == 0.0L) return 1.0;
    if (nu > 0.0L) return 0.0;
    throw std::domain_error("bessel_j: J_nu is singular at 0 for nu < 0");
  }
  const long double half = x / 2.0L;
  const long double q = -half * half;
  long double term = std::pow(half, nu) / std::tgamma(nu + 1.0L);
  long double sum = term;
  for (int m = 1; m < 400; ++m) {
    term *= q / (static_cast<long double>(m) * (m + nu));
    sum += term;
    const bool decreasing = m * (m + nu) > -q;
    if (decreasing && std::fabs(term) <= 1e-21L * std::fabs(sum)) break;
  }
  return static_cast<double>(sum);
}

double bessel_j_hankel(BesselOrder order, double lambda) {
  if (!(lambda > 0.0)) throw std::domain_error("bessel_j_hankel: lambda must be positive");
  const long double nu = order.nu();
  const long double x = lambda;
  const long double mu = 4.0L * nu * nu;
  long double p = 1.0L;
  long double q = 0.0L;
  long double a = 1.0L;
  long double prev = 1.0L;
  for (int k = 1; k <= 60; ++k) {
    const long double odd = 2.0L * k - 1.0L;
    const long double next = a * (mu - odd * odd) / (k * 8.0L * x);
    if (std::fabs(next) > std::fabs(prev) && k > 2) break;  // asymptotic series diverges from here
    a = next;
    prev = next;
    // a_k enters P (k even) or Q (k odd) with sign (-1)^{floor(k/2)}
    const long double s = ((k / 2) % 2 == 0) ? 1.0L : -1.0L;
    if (k % 2 == 0)
      p += s * a;
    else
      q += s * a;
    if (std::fabs(a) < 1e-19L) break;
  }
  const long double chi = x - (nu / 2.0L + 0.25L) * std::numbers::pi_v<long double>;
  const long double amp = std::sqrt(2.0L / (std::numbers::pi_v<long double> * x));
  return static_cast<double>(amp * (p * std::cos(chi) - q * std::sin(chi)));
}

double bessel_j(BesselOrder order, double lambda) {
  if (!(lambda >= 0.0)) throw std::domain_error("bessel_j: lambda must be nonnegative");
  if (lambda <= kBesselCrossover) return bessel_j_series(order, lambda);
  return bessel_j_hankel(order, lambda);
}

double bessel_j_prime(BesselOrder order, double lambda) {
  const double nu = order.nu();
  if (!(nu > 0.0 && nu < 1.0))
    throw std::domain_error("bessel_j_prime: order must lie in (0,1)");
  if (!(lambda > 0.0)) throw std::domain_error("bessel_j_prime: lambda must be positive");
  return 0.5 * (bessel_j(BesselOrder(nu - 1.0), lambda) - bessel_j(BesselOrder(nu + 1.0), lambda));
}

ZeroTable::ZeroTable(double H, std::vector<double> positive_zeros)
    : H_(checked_hurst(H)), omegas_(std::move(positive_zeros)) {
  for (std::size_t i = 1; i < omegas_.size(); ++i)
    if (!(omegas_[i] > omegas_[i - 1]))
      throw std::invalid_argument("ZeroTable: zeros must be strictly increasing");
}

double ZeroTable::omega(long k) const {
  const auto m = static_cast<std::size_t>(k < 0 ? -k : k);
  if (m > omegas_.size()) throw std::out_of_range("ZeroTable::omega: index beyond table");
  if (m == 0) return 0.0;
  return k < 0 ? -omegas_[m - 1] : omegas_[m - 1];
}

double ZeroTable::kadec_halfwidth(double H) {
  return std::max(0.125, std::fabs(1.0 - 2.0 * H) / 4.0);
}

ZeroTable bessel_zeros(double H, std::size_t K) {
  checked_hurst(H);
  if (K == 0) throw std::invalid_argument("bessel_zeros: K must be positive");
  const BesselOrder order(1.0 - H);
  const double band = ZeroTable::kadec_halfwidth(H);
  std::vector<double> zeros;
  zeros.reserve(K);
  for (std::size_t k = 1; k <= K; ++k) {
    const double kk = static_cast<double>(k);
    double lo = (kk - band) * std::numbers::pi;
    double hi = (kk + band) * std::numbers::pi;
    double flo = bessel_j(order, lo);
    const double fhi = bessel_j(order, hi);
    if (!(flo * fhi < 0.0))
      throw NumericError("bessel_zeros: no sign change in bracket for k=" + std::to_string(k));
    while (hi - lo > kZeroTolerance) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double fmid = bessel_j(order, mid);
      if (fmid == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((fmid < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fmid;
      } else {
        hi = mid;
      }
    }
    double x = 0.5 * (lo + hi);
    const double slope = bessel_j_prime(order, x);
    if (slope != 0.0) {
      const double polished = x - bessel_j(order, x) / slope;
      if (polished >= lo - kZeroTolerance && polished <= hi + kZeroTolerance) x = polished;
    }
    zeros.push_back(x);
  }
  return ZeroTable(H, std::move(zeros));
}

}  // namespace fracequiv
