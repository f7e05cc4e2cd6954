#pragma once

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace flagvar {

/// Real matrix exponential by Pade(6) with scaling and squaring.
Eigen::MatrixXd expm(const Eigen::MatrixXd& a);

struct QuadratureConfig {
  int nodes = 16;
  int panels = 8;
};

struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;
};

/// Gauss-Legendre nodes and weights on [-1, 1] (Golub-Welsch).
QuadratureRule gauss_legendre(int nodes);

/// Composite rule on [lo, hi]: `panels` equal panels, each further split at any
/// interior breakpoint, `nodes` Gauss points per piece.
QuadratureRule composite_rule(double lo, double hi, const QuadratureConfig& config,
                              const std::vector<double>& breakpoints = {});

template <typename F>
auto integrate(const QuadratureRule& rule, F&& f) -> decltype(f(0.0)) {
  auto sum = f(rule.points.front()) * rule.weights.front();
  for (std::size_t i = 1; i < rule.points.size(); ++i) sum += f(rule.points[i]) * rule.weights[i];
  return sum;
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
Eigen::VectorXd jacobi_eigenvalues(const Eigen::MatrixXd& a, double tol = 1e-14, int max_sweeps = 100);

struct Extremum {
  double argument;
  double value;
};

/// Maximizes f on [lo, hi] (Brent's method).
Extremum maximize(const std::function<double(double)>& f, double lo, double hi);

}  // namespace flagvar
