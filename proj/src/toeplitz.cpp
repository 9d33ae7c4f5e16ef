#include "fracequiv/toeplitz.hpp"

#include "fracequiv/fracnoise.hpp"
#include "fracequiv/quadrature.hpp"
#include "fracequiv/specfun.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fracequiv {
namespace {

// Durbin recursion on the normalised row; returns the largest |reflection coefficient|.
double max_reflection(const std::vector<double>& row) {
  const std::size_t n = row.size();
  if (n < 2) return 0.0;
  const double g0 = row[0];
  std::vector<double> y(n - 1), z(n - 1);
  double alpha = -row[1] / g0;
  double beta = 1.0;
  double worst = std::fabs(alpha);
  y[0] = alpha;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    beta *= (1.0 - alpha * alpha);
    double acc = row[k + 1] / g0;
    for (std::size_t i = 0; i < k; ++i) acc += (row[i + 1] / g0) * y[k - 1 - i];
    alpha = -acc / beta;
    worst = std::max(worst, std::fabs(alpha));
    if (worst >= 1.0 - kSingularMargin) return worst;
    for (std::size_t i = 0; i < k; ++i) z[i] = y[i] + alpha * y[k - 1 - i];
    for (std::size_t i = 0; i < k; ++i) y[i] = z[i];
    y[k] = alpha;
  }
  return worst;
}

constexpr double kGolden = 0.6180339887498949;

template <class F>
double golden_extremum(F&& f, double a, double b, bool minimize) {
  auto g = [&](double x) { return minimize ? f(x) : -f(x); };
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double gc = g(c);
  double gd = g(d);
  for (int it = 0; it < 80 && (b - a) > 1e-12 * std::max(1.0, std::fabs(a)); ++it) {
    if (gc < gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - kGolden * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + kGolden * (b - a);
      gd = g(d);
    }
  }
  const double best = std::min({g(a), g(b), gc, gd});
  return minimize ? best : -best;
}

double spectral_extremum(double H, std::size_t n, bool minimize) {
  checked_hurst(H);
  if (n < 2) throw std::invalid_argument("eigenvalue bounds need n >= 2");
  const double lo = 1.0 / static_cast<double>(n);
  const double hi = std::numbers::pi;
  std::vector<double> grid;
  constexpr std::size_t kHalf = 5000;
  grid.reserve(2 * kHalf + 1);
  const double knee = std::min(1.0, hi);
  for (std::size_t i = 0; i < kHalf; ++i)
    grid.push_back(lo * std::pow(knee / lo, static_cast<double>(i) / kHalf));
  for (std::size_t i = 0; i <= kHalf; ++i)
    grid.push_back(knee + (hi - knee) * static_cast<double>(i) / kHalf);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  auto f = [H](double x) { return fgn_spectral_density(H, x); };
  std::size_t best = 0;
  double best_val = f(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double v = f(grid[i]);
    if (minimize ? v < best_val : v > best_val) {
      best_val = v;
      best = i;
    }
  }
  const double a = grid[best == 0 ? 0 : best - 1];
  const double b = grid[std::min(best + 1, grid.size() - 1)];
  const double refined = golden_extremum(f, a, b, minimize);
  return minimize ? std::min(best_val, refined) : std::max(best_val, refined);
}

}  // namespace

ToeplitzCov::ToeplitzCov(std::vector<double> first_row) : row_(std::move(first_row)) {
  if (row_.empty()) throw std::invalid_argument("ToeplitzCov: empty first row");
  if (!(row_[0] > 0.0)) throw std::invalid_argument("ToeplitzCov: gamma(0) must be positive");
  if (max_reflection(row_) >= 1.0 - kSingularMargin)
    throw NumericError("ToeplitzCov: matrix is not (numerically) positive definite");
}

ToeplitzCov ToeplitzCov::fgn(double H, std::size_t n) { return ToeplitzCov(fgn_autocov_row(H, n)); }

std::vector<double> ToeplitzCov::multiply(std::span<const double> x) const {
  const std::size_t n = size();
  if (x.size() != n) throw std::invalid_argument("ToeplitzCov::multiply: dimension mismatch");
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += row_[i > j ? i - j : j - i] * x[j];
    y[i] = acc;
  }
  return y;
}

std::vector<double> toeplitz_solve(const ToeplitzCov& cov, std::span<const double> b) {
  const std::size_t n = cov.size();
  if (b.size() != n) throw std::invalid_argument("toeplitz_solve: dimension mismatch");
  const auto& row = cov.first_row();
  const double g0 = row[0];
  std::vector<double> x(n), y(n), scratch(n);
  x[0] = b[0] / g0;
  if (n > 1) {
    auto r = [&](std::size_t i) { return row[i] / g0; };
    double alpha = -r(1);
    double beta = 1.0;
    y[0] = alpha;
    for (std::size_t k = 1; k < n; ++k) {
      if (std::fabs(alpha) >= 1.0 - kSingularMargin)
        throw NumericError("toeplitz_solve: reflection coefficient reached 1 at step " + std::to_string(k));
      beta *= (1.0 - alpha * alpha);
      double acc = b[k] / g0;
      for (std::size_t i = 0; i < k; ++i) acc -= r(i + 1) * x[k - 1 - i];
      const double mu = acc / beta;
      for (std::size_t i = 0; i < k; ++i) scratch[i] = x[i] + mu * y[k - 1 - i];
      for (std::size_t i = 0; i < k; ++i) x[i] = scratch[i];
      x[k] = mu;
      if (k + 1 < n) {
        double acc2 = r(k + 1);
        for (std::size_t i = 0; i < k; ++i) acc2 += r(i + 1) * y[k - 1 - i];
        alpha = -acc2 / beta;
        for (std::size_t i = 0; i < k; ++i) scratch[i] = y[i] + alpha * y[k - 1 - i];
        for (std::size_t i = 0; i < k; ++i) y[i] = scratch[i];
        y[k] = alpha;
      }
    }
  }
  const std::vector<double> tx = cov.multiply(x);
  double res = 0.0, bn = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    res += (tx[i] - b[i]) * (tx[i] - b[i]);
    bn += b[i] * b[i];
  }
  if (std::sqrt(res) > 1e-8 * std::sqrt(bn) + 1e-300)
    throw NumericError("toeplitz_solve: residual check failed");
  return x;
}

namespace {
Eigen::MatrixXd dense(const ToeplitzCov& cov) {
  const auto n = static_cast<Eigen::Index>(cov.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = cov(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  return m;
}
}  // namespace

std::vector<double> toeplitz_solve_dense(const ToeplitzCov& cov, std::span<const double> b) {
  if (cov.size() > 1024) throw std::invalid_argument("toeplitz_solve_dense: n > 1024");
  if (b.size() != cov.size()) throw std::invalid_argument("toeplitz_solve_dense: dimension mismatch");
  Eigen::LLT<Eigen::MatrixXd> llt(dense(cov));
  if (llt.info() != Eigen::Success) throw NumericError("toeplitz_solve_dense: Cholesky failed");
  const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
  const Eigen::VectorXd sol = llt.solve(rhs);
  return {sol.data(), sol.data() + sol.size()};
}

EigenExtremes dense_eigen_extremes(const ToeplitzCov& cov) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense(cov), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("dense_eigen_extremes: eigensolver failed");
  return {solver.eigenvalues().minCoeff(), solver.eigenvalues().maxCoeff()};
}

double spectral_inf(double H, std::size_t n) { return spectral_extremum(H, n, true); }
double spectral_sup(double H, std::size_t n) { return spectral_extremum(H, n, false); }

double spectral_integral_near_zero(double H, double upper) {
  checked_hurst(H);
  if (!(upper > 0.0 && upper <= std::numbers::pi))
    throw std::domain_error("spectral_integral_near_zero: upper limit must lie in (0, pi]");
  // f(x) = x^{1-2H} h(x) with h bounded near 0
  const QuadRule& rule = jacobi_unit_rule(48, 0.0, 1.0 - 2.0 * H);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = upper * rule.nodes[i];
    const double h = fgn_spectral_density(H, x) * std::pow(x, 2.0 * H - 1.0);
    acc += rule.weights[i] * h;
  }
  return std::pow(upper, 2.0 - 2.0 * H) * acc;
}

double eig_lower_bound(double H, std::size_t n) {
  return (1.0 - 1.0 / std::numbers::pi) * spectral_inf(H, n);
}

double eig_upper_bound(double H, std::size_t n) {
  const double nn = static_cast<double>(n);
  return spectral_sup(H, n) + nn / std::numbers::pi * spectral_integral_near_zero(H, 1.0 / nn);
}

MeanShiftPair::MeanShiftPair(std::vector<double> v_, std::vector<double> w_) : v(std::move(v_)), w(std::move(w_)) {
  if (v.size() != w.size()) throw std::invalid_argument("MeanShiftPair: vectors must have equal length");
}

std::vector<double> MeanShiftPair::difference() const {
  std::vector<double> d(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) d[i] = v[i] - w[i];
  return d;
}

double kl_gaussian_shift(const ToeplitzCov& cov, const MeanShiftPair& pair) {
  if (pair.size() != cov.size()) throw std::invalid_argument("kl_gaussian_shift: dimension mismatch");
  const std::vector<double> d = pair.difference();
  if (std::all_of(d.begin(), d.end(), [](double x) { return x == 0.0; })) return 0.0;
  const std::vector<double> s = toeplitz_solve(cov, d);
  double q = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) q += d[i] * s[i];
  return 0.5 * std::max(q, 0.0);
}

KlBound kl_fgn_shift_bound(double H, std::size_t n, const MeanShiftPair& pair) {
  if (pair.size() != n) throw std::invalid_argument("kl_fgn_shift_bound: pair length must equal n");
  const double exact = kl_gaussian_shift(ToeplitzCov::fgn(H, n), pair);
  const std::vector<double> d = pair.difference();
  double sq = 0.0;
  for (double x : d) sq += x * x;
  const double factor = std::max(std::pow(static_cast<double>(n), 1.0 - 2.0 * H), 1.0);
  return {exact, factor * sq};
}

}  // namespace fracequiv
