#pragma once

// Independent reference implementations used only by the tests.

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using big = boost::multiprecision::cpp_bin_float_50;

/// J_nu(x) from the ascending series in 50-digit arithmetic.
inline double bessel_j_series50(double nu, double x) {
  const big bx(x);
  const big half = bx / 2;
  big term = boost::multiprecision::pow(half, big(nu)) / boost::math::tgamma(big(nu) + 1);
  big sum = term;
  const big q = -half * half;
  for (int m = 1; m < 400; ++m) {
    term *= q / (big(m) * (big(m) + big(nu)));
    sum += term;
    if (boost::multiprecision::abs(term) < big("1e-45") * boost::multiprecision::abs(sum) && m > 2) break;
  }
  return static_cast<double>(sum);
}

inline double bessel_j(double nu, double x) { return boost::math::cyl_bessel_j(nu, x); }

inline double bessel_zero(double nu, int k) { return boost::math::cyl_bessel_j_zero(nu, k); }

inline double gamma(double x) { return boost::math::tgamma(x); }

inline double beta(double a, double b) { return boost::math::beta(a, b); }

/// Composite Gauss-Legendre with nodes from Eigen's Golub-Welsch, independent of the library rules.
inline double integrate(const std::function<double(double)>& f, double a, double b, int panels = 200) {
  constexpr int order = 20;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
  for (int i = 1; i < order; ++i) {
    const double v = i / std::sqrt(4.0 * i * i - 1.0);
    J(i, i - 1) = v;
    J(i - 1, i) = v;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  const Eigen::VectorXd x = es.eigenvalues();
  const Eigen::VectorXd w = 2.0 * es.eigenvectors().row(0).array().square().transpose();
  const double h = (b - a) / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    for (int i = 0; i < order; ++i) acc += 0.5 * h * w[i] * f(lo + 0.5 * h * (x[i] + 1.0));
  }
  return acc;
}

inline std::complex<double> integrate_c(const std::function<std::complex<double>(double)>& f, double a, double b,
                                        int panels = 200) {
  const double re = integrate([&](double t) { return f(t).real(); }, a, b, panels);
  const double im = integrate([&](double t) { return f(t).imag(); }, a, b, panels);
  return {re, im};
}

/// fGN autocovariance straight from the definition.
inline double fgn_gamma(double H, long k) {
  const double m = std::fabs(static_cast<double>(k));
  return 0.5 * (std::pow(m + 1, 2 * H) - 2 * std::pow(m, 2 * H) + std::pow(std::fabs(m - 1), 2 * H));
}

inline Eigen::MatrixXd fgn_matrix(double H, int n) {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = fgn_gamma(H, i - j);
  return m;
}

}  // namespace oracle
