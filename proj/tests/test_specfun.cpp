#include "fracequiv/specfun.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace fracequiv;

TEST_CASE("gamma_fn known values and reference") {
  CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
  CHECK(gamma_fn(2.4) == doctest::Approx(oracle::gamma(2.4)).epsilon(1e-14));
  for (double x = 0.05; x < 5.0; x += 0.137) CHECK(gamma_fn(x) == doctest::Approx(oracle::gamma(x)).epsilon(1e-13));
  CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
  CHECK_THROWS_AS(gamma_fn(-1.5), std::domain_error);
}

TEST_CASE("checked_hurst rejects values outside (0,1)") {
  CHECK(checked_hurst(0.3) == 0.3);
  CHECK_THROWS_AS(checked_hurst(0.0), std::domain_error);
  CHECK_THROWS_AS(checked_hurst(1.0), std::domain_error);
  CHECK_THROWS_AS(checked_hurst(1.2), std::domain_error);
  CHECK_THROWS_AS(checked_hurst(std::nan("")), std::domain_error);
}

TEST_CASE("BesselOrder domain") {
  CHECK_NOTHROW(BesselOrder(-0.9));
  CHECK_NOTHROW(BesselOrder(1.9));
  CHECK_THROWS_AS(BesselOrder(-1.0), std::domain_error);
  CHECK_THROWS_AS(BesselOrder(2.0), std::domain_error);
}

TEST_CASE("bessel_j half order closed form") {
  const BesselOrder half(0.5);
  CHECK(std::fabs(bessel_j(half, std::numbers::pi)) < 1e-15);
  CHECK(bessel_j(half, std::numbers::pi / 2) == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-14));
  for (double x = 0.1; x < 200.0; x *= 1.3) {
    const double exact = std::sqrt(2.0 / (std::numbers::pi * x)) * std::sin(x);
    CHECK(std::fabs(bessel_j(half, x) - exact) < 1e-13);
  }
}

TEST_CASE("bessel_j against the 50-digit series oracle") {
  CHECK(std::fabs(bessel_j(BesselOrder(0.25), 1.0) - oracle::bessel_j_series50(0.25, 1.0)) < 1e-15);
  double worst = 0.0;
  for (double H : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (double nu : {-H, 1.0 - H, 2.0 - H}) {
      for (double x = 0.05; x <= 40.0; x += 0.173) {
        worst = std::max(worst, std::fabs(bessel_j(BesselOrder(nu), x) - oracle::bessel_j_series50(nu, x)));
      }
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("bessel_j against Boost for large arguments") {
  double worst = 0.0;
  for (double nu : {-0.7, -0.2, 0.3, 0.8, 1.3, 1.8})
    for (double x = 20.5; x < 5000.0; x *= 1.11) worst = std::max(worst, std::fabs(bessel_j(BesselOrder(nu), x) - oracle::bessel_j(nu, x)));
  CHECK(worst < 1e-12);
}

TEST_CASE("series and Hankel branches overlap near the crossover") {
  for (double nu : {-0.5, 0.3, 0.7, 1.5})
    for (double x = 14.0; x <= 17.0; x += 0.125)
      CHECK(std::fabs(bessel_j_series(BesselOrder(nu), x) - bessel_j_hankel(BesselOrder(nu), x)) < 1e-13);
}

TEST_CASE("bessel_j at zero") {
  CHECK(bessel_j(BesselOrder(0.0), 0.0) == 1.0);
  CHECK(bessel_j(BesselOrder(0.4), 0.0) == 0.0);
  CHECK_THROWS_AS(bessel_j(BesselOrder(-0.4), 0.0), std::domain_error);
  CHECK_THROWS_AS(bessel_j(BesselOrder(0.4), -1.0), std::domain_error);
}

TEST_CASE("bessel_j_prime") {
  const BesselOrder half(0.5);
  for (int k = 1; k <= 20; ++k) {
    const double x = k * std::numbers::pi;
    CHECK(std::fabs(bessel_j_prime(half, x)) == doctest::Approx(std::sqrt(2.0 / std::numbers::pi) / std::sqrt(x)).epsilon(1e-12));
  }
  for (double x : {0.7, 3.3, 12.0, 31.0}) {
    const double h = 1e-5;
    const double fd = (bessel_j(half, x + h) - bessel_j(half, x - h)) / (2 * h);
    CHECK(std::fabs(bessel_j_prime(half, x) - fd) < 1e-6);
  }
  {
    const double h = 1e-4;
    const double fd = (-oracle::bessel_j_series50(0.3, 5 + 2 * h) + 8 * oracle::bessel_j_series50(0.3, 5 + h) -
                       8 * oracle::bessel_j_series50(0.3, 5 - h) + oracle::bessel_j_series50(0.3, 5 - 2 * h)) /
                      (12 * h);
    CHECK(std::fabs(bessel_j_prime(BesselOrder(0.3), 5.0) - fd) < 1e-8);
  }
  CHECK_THROWS_AS(bessel_j_prime(BesselOrder(1.5), 1.0), std::domain_error);
  CHECK_THROWS_AS(bessel_j_prime(half, 0.0), std::domain_error);
}

TEST_CASE("bessel_zeros") {
  const ZeroTable h = bessel_zeros(0.5, 3);
  for (long k = 1; k <= 3; ++k) CHECK(std::fabs(h.omega(k) - k * std::numbers::pi) < 1e-12);
  CHECK(h.omega(0) == 0.0);
  CHECK(h.omega(-2) == -h.omega(2));
  CHECK_THROWS_AS(h.omega(4), std::out_of_range);

  const ZeroTable z = bessel_zeros(0.75, 1);
  CHECK(z.omega(1) >= 0.875 * std::numbers::pi);
  CHECK(z.omega(1) <= 1.125 * std::numbers::pi);
  CHECK(std::fabs(z.omega(1) - oracle::bessel_zero(0.25, 1)) < 1e-11);

  const ZeroTable low = bessel_zeros(0.3, 50);
  CHECK(std::fabs(low.omega(50) - (50 + 0.25 * (1 - 0.6)) * std::numbers::pi) < 1e-3);

  for (double H = 0.1; H < 0.95; H += 0.1) {
    const ZeroTable t = bessel_zeros(H, 200);
    double worst = 0.0, kadec = 0.0;
    for (long k = 1; k <= 200; ++k) {
      worst = std::max(worst, std::fabs(t.omega(k) - oracle::bessel_zero(1.0 - H, static_cast<int>(k))));
      kadec = std::max(kadec, std::fabs(t.omega(k) / std::numbers::pi - k));
    }
    CHECK(worst < 1e-10);
    CHECK(kadec < 0.25);
  }
  CHECK_THROWS_AS(bessel_zeros(0.5, 0), std::invalid_argument);
  CHECK_THROWS_AS(bessel_zeros(1.5, 3), std::domain_error);
}

TEST_CASE("normalization integral of J^2 / lambda") {
  for (double H : {0.3, 0.5, 0.7}) {
    const BesselOrder nu(1.0 - H);
    const double lambda_max = 200.0;
    // lambda = u^2 removes the singularity at 0: integrand 2 J(u^2)^2 / u
    const int steps = 400000;
    const double umax = std::sqrt(lambda_max);
    const double h = umax / steps;
    double acc = 0.0;
    for (int i = 1; i <= steps; ++i) {
      const double u = i * h;
      const double j = bessel_j(nu, u * u);
      acc += (i == steps ? 0.5 : 1.0) * 2.0 * j * j / u;
    }
    acc *= h;
    acc += 1.0 / (std::numbers::pi * lambda_max);
    CHECK(std::fabs(acc - 1.0 / (2.0 - 2.0 * H)) < 2e-3);
  }
}

TEST_CASE("envelope bound min(x^{1-H}, x^{-1/2})") {
  for (double H : {0.2, 0.5, 0.8}) {
    const BesselOrder nu(1.0 - H);
    double c = 0.0;
    for (double x = 1e-3; x < 2000.0; x *= 1.01)
      c = std::max(c, std::fabs(bessel_j(nu, x)) / std::min(std::pow(x, 1.0 - H), std::pow(x, -0.5)));
    CHECK(c < 2.0);
  }
}
