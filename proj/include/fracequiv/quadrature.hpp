#pragma once

// Gaussian quadrature rules (Legendre and Jacobi) used by the basis and
// bound computations.

#include <cstddef>
#include <functional>
#include <vector>

namespace fracequiv {

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Jacobi rule on [-1,1] for the weight (1-x)^alpha (1+x)^beta,
/// alpha, beta > -1. Golub-Welsch eigenvalues, Newton-polished, with
/// Christoffel weights.
QuadRule gauss_jacobi(std::size_t n, double alpha, double beta);

/// Gauss-Legendre rule mapped to [a,b].
QuadRule gauss_legendre(std::size_t n, double a, double b);

/// Rule on [0,1] for the weight (1-u)^alpha u^beta. Rules are cached per
/// (n, alpha, beta); the returned reference stays valid for the program lifetime.
const QuadRule& jacobi_unit_rule(std::size_t n, double alpha, double beta);

/// Gauss-Legendre on [0,1], cached.
const QuadRule& legendre_unit_rule(std::size_t n);

/// Composite Gauss-Legendre integral of f over [a,b] using `panels` equal panels.
double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    std::size_t panels, std::size_t order = 16);

}  // namespace fracequiv
