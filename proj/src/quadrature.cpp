#include "fracequiv/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace fracequiv {
namespace {

struct JacobiRecurrence {
  std::vector<double> diag;  // a_k, k = 0..n-1
  std::vector<double> off;   // b_k, k = 1..n-1 stored at index k-1
  double mu0;
};

JacobiRecurrence jacobi_recurrence(std::size_t n, double alpha, double beta) {
  JacobiRecurrence r;
  r.diag.resize(n);
  r.off.resize(n > 0 ? n - 1 : 0);
  const double ab = alpha + beta;
  for (std::size_t k = 0; k < n; ++k) {
    const double s = 2.0 * k + ab;
    if (k == 0) {
      r.diag[0] = (beta - alpha) / (ab + 2.0);
    } else {
      r.diag[k] = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    }
  }
  for (std::size_t k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double s = 2.0 * kk + ab;
    const double num = 4.0 * kk * (kk + alpha) * (kk + beta) * (kk + ab);
    const double den = s * s * (s + 1.0) * (s - 1.0);
    r.off[k - 1] = std::sqrt(num / den);
  }
  r.mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) -
                   std::lgamma(ab + 2.0));
  return r;
}

// Orthonormal p_n(x), p_n'(x) and sum_{k<n} p_k(x)^2 by the three-term recurrence.
struct PolyEval {
  double p;
  double dp;
  double christoffel;
};

PolyEval eval_orthonormal(const JacobiRecurrence& r, std::size_t n, double x) {
  double p_prev = 0.0;
  double dp_prev = 0.0;
  double p = 1.0 / std::sqrt(r.mu0);
  double dp = 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sum += p * p;
    const double b_next = k + 1 < n ? r.off[k] : 0.0;
    const double b_k = k > 0 ? r.off[k - 1] : 0.0;
    double p_next;
    double dp_next;
    if (k + 1 < n) {
      p_next = ((x - r.diag[k]) * p - b_k * p_prev) / b_next;
      dp_next = (p + (x - r.diag[k]) * dp - b_k * dp_prev) / b_next;
    } else {
      // unnormalized final step; only the zero set and its derivative matter
      p_next = (x - r.diag[k]) * p - b_k * p_prev;
      dp_next = p + (x - r.diag[k]) * dp - b_k * dp_prev;
    }
    p_prev = p;
    dp_prev = dp;
    p = p_next;
    dp = dp_next;
  }
  return {p, dp, sum};
}

}  // namespace

QuadRule gauss_jacobi(std::size_t n, double alpha, double beta) {
  if (n == 0) throw std::invalid_argument("gauss_jacobi: n must be positive");
  if (!(alpha > -1.0 && beta > -1.0)) throw std::domain_error("gauss_jacobi: alpha, beta must exceed -1");
  const JacobiRecurrence r = jacobi_recurrence(n, alpha, beta);
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(r.diag.data(), static_cast<Eigen::Index>(n));
  Eigen::VectorXd e(static_cast<Eigen::Index>(n > 1 ? n - 1 : 0));
  for (std::size_t i = 0; i + 1 < n; ++i) e[static_cast<Eigen::Index>(i)] = r.off[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("gauss_jacobi: eigensolver failed");

  QuadRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = solver.eigenvalues()[static_cast<Eigen::Index>(i)];
    for (int it = 0; it < 3; ++it) {
      const PolyEval pe = eval_orthonormal(r, n, x);
      if (pe.dp == 0.0) break;
      const double step = pe.p / pe.dp;
      if (!std::isfinite(step) || std::fabs(step) > 1e-6) break;
      x -= step;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 1.0 / eval_orthonormal(r, n, x).christoffel;
  }
  return rule;
}

QuadRule gauss_legendre(std::size_t n, double a, double b) {
  QuadRule rule = gauss_jacobi(n, 0.0, 0.0);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

const QuadRule& jacobi_unit_rule(std::size_t n, double alpha, double beta) {
  static std::mutex mutex;
  static std::map<std::tuple<std::size_t, double, double>, std::unique_ptr<QuadRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{n, alpha, beta}];
  if (!slot) {
    QuadRule rule = gauss_jacobi(n, alpha, beta);
    const double scale = std::pow(2.0, -(alpha + beta + 1.0));
    for (std::size_t i = 0; i < n; ++i) {
      rule.nodes[i] = 0.5 * (rule.nodes[i] + 1.0);
      rule.weights[i] *= scale;
    }
    slot = std::make_unique<QuadRule>(std::move(rule));
  }
  return *slot;
}

const QuadRule& legendre_unit_rule(std::size_t n) { return jacobi_unit_rule(n, 0.0, 0.0); }

double integrate_gl(const std::function<double(double)>& f, double a, double b, std::size_t panels,
                    std::size_t order) {
  if (panels == 0) throw std::invalid_argument("integrate_gl: panels must be positive");
  const QuadRule& rule = legendre_unit_rule(order);
  const double h = (b - a) / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double left = a + h * static_cast<double>(p);
    double part = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) part += rule.weights[i] * f(left + h * rule.nodes[i]);
    total += h * part;
  }
  return total;
}

}  // namespace fracequiv
