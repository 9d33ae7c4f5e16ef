#include "fracequiv/fracnoise.hpp"
#include "fracequiv/specfun.hpp"
#include "fracequiv/toeplitz.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace fracequiv;

namespace {
std::vector<double> random_vec(std::size_t n, unsigned seed) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> d;
  std::vector<double> v(n);
  for (double& x : v) x = d(g);
  return v;
}
}  // namespace

TEST_CASE("identity and white-noise solves") {
  std::vector<double> row(10, 0.0);
  row[0] = 1.0;
  const auto b = random_vec(10, 1);
  const auto x = toeplitz_solve(ToeplitzCov(row), b);
  for (std::size_t i = 0; i < 10; ++i) CHECK(x[i] == doctest::Approx(b[i]).epsilon(1e-14));
  const auto y = toeplitz_solve(ToeplitzCov::fgn(0.5, 10), b);
  for (std::size_t i = 0; i < 10; ++i) CHECK(y[i] == doctest::Approx(b[i]).epsilon(1e-12));
}

TEST_CASE("Levinson matches a dense LU solve") {
  // random SPD Toeplitz: autocovariance of an MA(3) process plus a ridge
  const std::size_t n = 64;
  const std::vector<double> ma{1.0, 0.6, -0.3, 0.2};
  std::vector<double> row(n, 0.0);
  for (std::size_t k = 0; k < ma.size(); ++k)
    for (std::size_t j = 0; j + k < ma.size(); ++j) row[k] += ma[j] * ma[j + k];
  row[0] += 0.1;
  const ToeplitzCov cov(row);
  const auto b = random_vec(n, 2);
  const auto x = toeplitz_solve(cov, b);
  Eigen::MatrixXd dense(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) dense(i, j) = cov(i, j);
  const Eigen::VectorXd ref = dense.fullPivLu().solve(Eigen::Map<const Eigen::VectorXd>(b.data(), n));
  for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(x[i] - ref[i]) < 1e-8 * std::max(1.0, std::fabs(ref[i])));
}

TEST_CASE("Levinson agrees with the dense Cholesky reference on fGN") {
  for (double H : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (std::size_t n : {16, 128, 512}) {
      const ToeplitzCov cov = ToeplitzCov::fgn(H, n);
      const auto b = random_vec(n, 3);
      const auto x = toeplitz_solve(cov, b);
      const auto y = toeplitz_solve_dense(cov, b);
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        num += (x[i] - y[i]) * (x[i] - y[i]);
        den += y[i] * y[i];
      }
      CHECK(std::sqrt(num / den) < 1e-8);
      Eigen::LLT<Eigen::MatrixXd> llt(oracle::fgn_matrix(H, static_cast<int>(n)));
      CHECK(llt.info() == Eigen::Success);
    }
  }
}

TEST_CASE("non positive definite rows are rejected") {
  CHECK_THROWS_AS(ToeplitzCov(std::vector<double>{1.0, 1.0, 1.0}), NumericError);
  CHECK_THROWS_AS(ToeplitzCov(std::vector<double>{1.0, 1.5}), NumericError);
  CHECK_THROWS_AS(ToeplitzCov(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(ToeplitzCov(std::vector<double>{0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("eigenvalue bounds at H = 1/2") {
  for (std::size_t n : {16, 100}) {
    CHECK(eig_lower_bound(0.5, n) == doctest::Approx(1.0 - 1.0 / std::numbers::pi).epsilon(1e-6));
    CHECK(eig_upper_bound(0.5, n) == doctest::Approx(1.0 + 1.0 / std::numbers::pi).epsilon(1e-6));
  }
}

TEST_CASE("eigenvalue bounds enclose the dense spectrum") {
  for (int i = 1; i <= 9; ++i) {
    const double H = i / 10.0;
    for (std::size_t n : {16, 64, 256}) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(oracle::fgn_matrix(H, static_cast<int>(n)), Eigen::EigenvaluesOnly);
      CHECK(eig_lower_bound(H, n) <= es.eigenvalues().minCoeff());
      CHECK(eig_upper_bound(H, n) >= es.eigenvalues().maxCoeff());
      const EigenExtremes ex = dense_eigen_extremes(ToeplitzCov::fgn(H, n));
      CHECK(ex.min == doctest::Approx(es.eigenvalues().minCoeff()).epsilon(1e-10));
    }
  }
}

TEST_CASE("Gaussian shift KL") {
  const ToeplitzCov white = ToeplitzCov::fgn(0.5, 8);
  std::vector<double> e1(8, 0.0);
  e1[0] = 1.0;
  const std::vector<double> zero(8, 0.0);
  CHECK(kl_gaussian_shift(white, MeanShiftPair(e1, zero)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(kl_gaussian_shift(white, MeanShiftPair(e1, e1)) == 0.0);

  const std::size_t n = 128;
  const ToeplitzCov cov = ToeplitzCov::fgn(0.7, n);
  const auto v = random_vec(n, 4);
  const auto w = random_vec(n, 5);
  const double kl = kl_gaussian_shift(cov, MeanShiftPair(v, w));
  Eigen::VectorXd d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = v[i] - w[i];
  const Eigen::MatrixXd inv = oracle::fgn_matrix(0.7, static_cast<int>(n)).inverse();
  CHECK(kl == doctest::Approx(0.5 * d.dot(inv * d)).epsilon(1e-8));
  CHECK(kl_gaussian_shift(cov, MeanShiftPair(w, v)) == doctest::Approx(kl).epsilon(1e-12));

  std::vector<double> v2(n);
  for (std::size_t i = 0; i < n; ++i) v2[i] = w[i] + 3.0 * (v[i] - w[i]);
  CHECK(kl_gaussian_shift(cov, MeanShiftPair(v2, w)) == doctest::Approx(9.0 * kl).epsilon(1e-10));
  CHECK_THROWS_AS(MeanShiftPair(v, std::vector<double>(3)), std::invalid_argument);
}

TEST_CASE("fGN shift bound shape") {
  std::vector<double> e1(32, 0.0);
  e1[0] = 1.0;
  const KlBound b = kl_fgn_shift_bound(0.5, 32, MeanShiftPair(e1, std::vector<double>(32, 0.0)));
  CHECK(b.exact == doctest::Approx(0.5));
  CHECK(b.bound_shape == doctest::Approx(1.0));
  const KlBound z = kl_fgn_shift_bound(0.7, 32, MeanShiftPair(e1, e1));
  CHECK(z.exact == 0.0);
  CHECK(z.bound_shape == 0.0);

  double prev = 1e300, first = 0.0;
  for (std::size_t n = 64; n <= 1024; n *= 2) {
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = std::sin(7.0 * (i + 1.0) / n) / std::sqrt(static_cast<double>(n));
    const KlBound kb = kl_fgn_shift_bound(0.7, n, MeanShiftPair(d, std::vector<double>(n, 0.0)));
    const double ratio = kb.exact / kb.bound_shape;
    CHECK(std::isfinite(ratio));
    if (n == 64) first = ratio;
    CHECK(ratio <= prev * 1.05);
    prev = ratio;
  }
  CHECK(prev <= first);
}
