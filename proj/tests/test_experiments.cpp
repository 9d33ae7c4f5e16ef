#include "fracequiv/experiments.hpp"
#include "fracequiv/parallel.hpp"
#include "fracequiv/toeplitz.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace fracequiv;

namespace {
NonharmonicSeries smooth_series(const BasisTable& t, std::size_t K, unsigned seed) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> d;
  NonharmonicSeries s(t, K);
  s.set(0, d(g));
  for (std::size_t k = 1; k <= K; ++k) {
    const double re = d(g), im = d(g);
    s.set(static_cast<long>(k), cplx(re, im) * std::pow(1.0 + k, -2.0));
  }
  return s;
}
}  // namespace

TEST_CASE("RegressionFunction") {
  const RegressionFunction odd([](double t) { return std::sin(2 * std::numbers::pi * t); }, true);
  CHECK(odd.symmetric());
  CHECK(odd.antisymmetry_defect() < 1e-10);
  const RegressionFunction lin([](double t) { return t; });
  CHECK(lin.antisymmetry_defect() == doctest::Approx(1.0));
  const BasisTable t = build_basis_table(0.5, 4);
  NonharmonicSeries s(t, 4);
  s.set(0, 2.0);
  const RegressionFunction fs(s);
  CHECK(fs(0.3) == doctest::Approx(2.0));
  CHECK(fs.series().has_value());
}

TEST_CASE("E1 simulation") {
  const RegressionFunction zero([](double) { return 0.0; });
  const E1Sample a = simulate_e1(zero, 0.6, 64, 5);
  CHECK(a.y == simulate_fgn(0.6, 64, 5));
  CHECK(a.y.size() == 64);
  const RegressionFunction lin([](double t) { return t; });
  const E1Sample b = simulate_e1(lin, 0.6, 64, 5);
  for (std::size_t i = 0; i < 64; ++i) CHECK(b.y[i] - a.y[i] == doctest::Approx((i + 1) / 64.0));

  // sd of the sample mean is n^{H-1}
  for (double H : {0.5, 0.8}) {
    const std::size_t n = 256, reps = 4000;
    const FgnSampler s(H, n);
    const RegressionFunction c([](double) { return 0.7; });
    std::vector<double> means(reps);
    for (std::size_t r = 0; r < reps; ++r) {
      Rng rng = make_rng(split_seed(1, 0, r));
      const E1Sample e = simulate_e1(c, s, rng, r);
      means[r] = pairwise_sum(e.y) / n;
    }
    const double m = pairwise_sum(means) / reps;
    double v = 0.0;
    for (double x : means) v += (x - m) * (x - m);
    v /= reps - 1;
    CHECK(std::fabs(m - 0.7) < 4.0 * std::pow(n, H - 1.0) / std::sqrt(reps));
    CHECK(std::sqrt(v) == doctest::Approx(std::pow(n, H - 1.0)).epsilon(0.05));
  }
}

TEST_CASE("E3 simulation and estimator") {
  const BasisTable t = build_basis_table(0.7, 40);
  const NonharmonicSeries zero(t, 40);
  const std::size_t reps = 2000;
  std::vector<double> z3(reps);
  for (std::size_t r = 0; r < reps; ++r) z3[r] = simulate_e3(zero, t, 100, r).z_prime[3];
  double v = 0.0;
  for (double x : z3) v += x * x;
  CHECK(std::sqrt(v / reps) == doctest::Approx(std::pow(100.0, -0.3)).epsilon(0.05));
  CHECK(simulate_e3(zero, t, 100, 1).z_prime[0] == 0.0);

  const NonharmonicSeries th = smooth_series(t, 10, 3);
  const E3Sample big = simulate_e3(th, t, std::size_t{1} << 62, 9);
  const NonharmonicSeries est = estimate_cutoff(big, t, 10);
  const double noise = std::pow(std::ldexp(1.0, 62), -0.3);
  for (long k = -10; k <= 10; ++k) CHECK(std::abs(est.theta(k) - th.theta(k)) < 8.0 * t.sigma(std::labs(k)) * noise);
  const NonharmonicSeries m0 = estimate_cutoff(big, t, 0);
  CHECK(m0.theta(0).real() == doctest::Approx(t.sigma(0) * big.z[0]));
  CHECK(std::abs(m0.theta(1)) == 0.0);
  CHECK_THROWS_AS(estimate_cutoff(big, t, 11), std::invalid_argument);
  CHECK(simulate_e3(th, t, 64, 4).z == simulate_e3(th, t, 64, 4).z);
}

TEST_CASE("E3 KL agrees with the RKHS KL") {
  for (double H : {0.3, 0.6}) {
    const BasisTable t = build_basis_table(H, 20);
    const NonharmonicSeries zero(t, 20);
    for (unsigned seed = 1; seed <= 5; ++seed) {
      const NonharmonicSeries th = smooth_series(t, 20, seed);
      for (std::size_t n : {64, 256}) {
        const double e3 = e3_kl(th, zero, t, n);
        const double h = kl_rkhs(RkhsElement{th}, RkhsElement{zero}, std::pow(n, H - 1.0), t);
        CHECK(e3 == doctest::Approx(h).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("cutoff rule and slope fit") {
  CHECK(default_cutoff(0.5, 1.0, 1000) == static_cast<std::size_t>(std::ceil(std::pow(1000.0, 1.0 / 3.0))));
  CHECK(default_cutoff(0.7, 1.0, 4096, 2.0) == static_cast<std::size_t>(std::ceil(2.0 * std::pow(4096.0, 0.3 / 1.3))));
  const std::vector<double> x{1, 2, 4, 8, 16};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -0.75));
  const SlopeFit f = loglog_fit(x, y);
  CHECK(f.slope == doctest::Approx(-0.75).epsilon(1e-12));
  CHECK(f.ci_low <= f.slope);
  CHECK(f.ci_high >= f.slope);
}

TEST_CASE("rate experiment") {
  std::vector<std::size_t> grid;
  for (int e = 8; e <= 14; ++e) grid.push_back(std::size_t{1} << e);
  RateOptions o;
  const RiskReport r = rate_experiment(0.7, 1.0, 1.0, grid, 100, 17, o);
  CHECK(std::fabs(r.fit.slope - r.expected_slope) < 0.1);
  CHECK(r.expected_slope == doctest::Approx(-0.6 / 1.3));
  o.jobs = 3;
  const RiskReport p = rate_experiment(0.7, 1.0, 1.0, grid, 100, 17, o);
  CHECK(p.mean_risk == r.mean_risk);
  CHECK(p.fit.slope == r.fit.slope);
  const NonharmonicSeries truth = rate_test_function(build_basis_table(0.7, 100), 100, 1.0, 2.0, 5);
  CHECK(truth.sobolev_norm_sq(1.0) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("weighted mean") {
  const std::vector<double> w = weighted_mean_weights(0.5, 10);
  for (std::size_t i = 0; i < 9; ++i) CHECK(w[i] == doctest::Approx(1.0 / 9.0));
  CHECK(w[9] == 0.0);
  const std::vector<double> y{1, 2, 3, 4, 5, 6, 7, 8, 9, 100};
  CHECK(weighted_mean_estimator(E1Sample{0.5, 10, 0, y}) == doctest::Approx(5.0));
  const std::vector<double> w8 = weighted_mean_weights(0.8, 64);
  CHECK(pairwise_sum(w8) == doctest::Approx(1.0).epsilon(1e-15));

  const WeightedMeanReport r = weighted_mean_experiment(0.8, 256, 2000, 3, 1.5, 1);
  CHECK(r.exact_ratio < 1.0);
  CHECK(std::fabs(r.ratio - r.exact_ratio) < 0.05);
  const WeightedMeanReport p = weighted_mean_experiment(0.8, 256, 2000, 3, 1.5, 4);
  CHECK(p.ratio == r.ratio);
}

TEST_CASE("interpolation operator") {
  for (double H : {0.2, 0.5, 0.85}) {
    const std::size_t n = 128;
    std::mt19937_64 g(1);
    std::normal_distribution<double> d;
    std::vector<double> x(n), y(n), s(n), t(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = d(g);
      y[i] = d(g);
      s[i] = x[i] + y[i];
      t[i] = (i + 1.0) / n;
    }
    const LInterpolator L(H, n);
    const auto lx = L(x, t);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(lx[i] - x[i]) < 1e-9);
    const std::vector<double> mid{0.013, 0.5001, 0.77};
    const auto a = L(x, mid), b = L(y, mid), c = L(s, mid);
    for (std::size_t i = 0; i < mid.size(); ++i) CHECK(std::fabs(c[i] - a[i] - b[i]) < 1e-10);
  }
  // Brownian case: linear interpolation of the data between grid points
  const std::size_t n = 8;
  std::vector<double> x{0.3, -1.0, 2.0, 0.5, 0.0, 1.1, -0.4, 0.9};
  const std::vector<double> q{0.5 / 8, 2.25 / 8, 7.5 / 8};
  const auto v = interpolate_L(0.5, n, x, q);
  CHECK(v[0] == doctest::Approx(0.15));
  CHECK(v[1] == doctest::Approx(-1.0 + 0.25 * 3.0));
  CHECK(v[2] == doctest::Approx(0.5 * (-0.4 + 0.9)));
  CHECK(LInterpolator(0.5, 64).pivot_ratio() < LInterpolator::kIllConditioned);
}

TEST_CASE("condition (i)") {
  const RegressionFunction c([](double) { return 2.0; });
  CHECK(condition_i_diagnostic(c, 0.7, 50) < 1e-28);
  const RegressionFunction lin([](double t) { return t; });
  for (std::size_t n : {10, 100, 1000}) CHECK(condition_i_diagnostic(lin, 0.5, n) == doctest::Approx(1.0 / (4.0 * n)).epsilon(1e-10));
  const RegressionFunction smooth([](double t) { return std::cos(3 * t) + t * t; });
  double prev = 1e300;
  for (std::size_t n = 64; n <= 4096; n *= 2) {
    const double v = condition_i_diagnostic(smooth, 0.7, n);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("condition (ii)") {
  const BasisTable t7 = build_basis_table(0.7, 50);
  CHECK(condition_ii_residual(NonharmonicSeries(t7, 8), t7, 32).scaled == 0.0);
  for (double H : {0.5, 0.7}) {
    const BasisTable t = build_basis_table(H, 50);
    for (unsigned seed = 1; seed <= 4; ++seed) {
      const NonharmonicSeries th = smooth_series(t, 8, seed);
      double prev_d = 1e300, prev_s = 1e300;
      for (std::size_t n = 16; n <= 256; n *= 2) {
        const ProjectionResidual r = condition_ii_residual(th, t, n);
        CHECK(r.distance <= prev_d + 1e-7);
        if (H == 0.7) CHECK(r.scaled < prev_s);
        prev_d = r.distance;
        prev_s = r.scaled;
      }
    }
  }
}

TEST_CASE("separation constructions") {
  const BasisTable t = build_basis_table(0.7, separation_table_size(256, SeparationCase::alpha_half));
  CHECK(t.K() == 512);
  const SeparationReport a = separation_experiment(0.7, 64, SeparationCase::alpha_half, t);
  const SeparationReport b = separation_experiment(0.7, 256, SeparationCase::alpha_half, t);
  CHECK(b.kl_e1 < a.kl_e1);
  CHECK(b.e3_separation > 0.1);
  // the sequence-model KL of the pair in closed form
  const double expect = 0.5 * std::pow(256.0, 0.6) * 2.0 * (0.25 / (4.0 * 256)) * (1 / (t.a(256) * t.a(256)) + 1 / (t.a(512) * t.a(512)));
  CHECK(b.e3_separation == doctest::Approx(expect).epsilon(1e-12));
  const SeparationReport none = separation_experiment(0.7, 64, SeparationCase::alpha_half, t, 0.0);
  CHECK(none.kl_e1 == 0.0);
  CHECK(none.e3_separation == 0.0);

  const BasisTable lo = build_basis_table(0.7, separation_table_size(128, SeparationCase::alpha_low));
  const SeparationReport c = separation_experiment(0.7, 128, SeparationCase::alpha_low, lo);
  CHECK(c.kl_e1 >= 0.0);
  CHECK(c.e3_separation > 0.0);
  CHECK_THROWS_AS(separation_experiment(0.7, 512, SeparationCase::alpha_half, t), std::invalid_argument);
}

TEST_CASE("Sobolev constraint") {
  for (double H : {0.3, 0.5, 0.8}) {
    // symmetric f: f' is odd about 1/2
    const auto sym = sobolev_constraint_check({[](double s) { return -std::sin(std::numbers::pi * (s - 0.5)); }}, H);
    CHECK(std::fabs(sym[0]) < 1e-13);
    const auto lin = sobolev_constraint_check({[](double) { return 1.0; }}, H);
    CHECK(lin[0] == doctest::Approx(oracle::beta(1.5 - H, 1.5 - H)).epsilon(1e-12));
    const auto fd = sobolev_constraint_check_fd([](double s) { return s; }, H, 1);
    CHECK(fd[0] == doctest::Approx(lin[0]).epsilon(1e-10));
    const auto fd2 = sobolev_constraint_check_fd([](double s) { return std::cos(2 * std::numbers::pi * s); }, H, 2);
    CHECK(std::fabs(fd2[0]) < 1e-8);
  }
  // periodic f at H = 1/2: the integral of f' is f(1) - f(0) = 0
  const auto per = sobolev_constraint_check_fd([](double s) { return std::sin(2 * std::numbers::pi * s) + std::cos(6 * std::numbers::pi * s); }, 0.5, 1);
  CHECK(std::fabs(per[0]) < 1e-9);
}
