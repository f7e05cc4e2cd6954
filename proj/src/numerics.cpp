#include "flagvar/numerics.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/tools/minima.hpp>
#include <Eigen/Eigenvalues>

#include "flagvar/error.hpp"

namespace flagvar {

Eigen::MatrixXd expm(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / 0.5))));
  const Eigen::MatrixXd x = a / std::ldexp(1.0, squarings);

  // Pade(6, 6) coefficients
  constexpr double c[] = {1.0,
                          1.0 / 2.0,
                          5.0 / 44.0,
                          1.0 / 66.0,
                          1.0 / 792.0,
                          1.0 / 15840.0,
                          1.0 / 665280.0};
  const Eigen::MatrixXd x2 = x * x;
  const Eigen::MatrixXd x4 = x2 * x2;
  const Eigen::MatrixXd x6 = x4 * x2;
  const Eigen::MatrixXd even = c[0] * id + c[2] * x2 + c[4] * x4 + c[6] * x6;
  const Eigen::MatrixXd odd = x * (c[1] * id + c[3] * x2 + c[5] * x4);
  Eigen::MatrixXd r = (even - odd).partialPivLu().solve(even + odd);
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

QuadratureRule gauss_legendre(int nodes) {
  if (nodes < 1) throw Error(ErrorKind::Usage, "quadrature needs at least one node");
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(nodes, nodes);
  for (int k = 1; k < nodes; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    jac(k, k - 1) = jac(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  QuadratureRule rule;
  for (int k = 0; k < nodes; ++k) {
    rule.points.push_back(es.eigenvalues()[k]);
    const double v = es.eigenvectors()(0, k);
    rule.weights.push_back(2.0 * v * v);
  }
  return rule;
}

QuadratureRule composite_rule(double lo, double hi, const QuadratureConfig& config,
                              const std::vector<double>& breakpoints) {
  if (config.panels < 1) throw Error(ErrorKind::Usage, "quadrature needs at least one panel");
  std::vector<double> cuts;
  for (int p = 0; p <= config.panels; ++p) cuts.push_back(lo + (hi - lo) * p / config.panels);
  const double eps = 1e-12 * std::max(1.0, std::abs(hi - lo));
  for (double b : breakpoints)
    if (b > lo + eps && b < hi - eps) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(), [&](double u, double v) { return std::abs(u - v) <= eps; }),
             cuts.end());

  const QuadratureRule base = gauss_legendre(config.nodes);
  QuadratureRule rule;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double half = 0.5 * (cuts[p + 1] - cuts[p]);
    const double mid = 0.5 * (cuts[p + 1] + cuts[p]);
    for (std::size_t k = 0; k < base.points.size(); ++k) {
      rule.points.push_back(mid + half * base.points[k]);
      rule.weights.push_back(half * base.weights[k]);
    }
  }
  return rule;
}

Eigen::VectorXd jacobi_eigenvalues(const Eigen::MatrixXd& input, double tol, int max_sweeps) {
  Eigen::MatrixXd a = 0.5 * (input + input.transpose());
  const int n = static_cast<int>(a.rows());
  const double scale = std::max(a.norm(), 1e-300);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(2.0 * off) <= tol * scale) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  Eigen::VectorXd ev = a.diagonal();
  std::sort(ev.data(), ev.data() + n);
  return ev;
}

Extremum maximize(const std::function<double(double)>& f, double lo, double hi) {
  const auto result = boost::math::tools::brent_find_minima([&](double x) { return -f(x); }, lo, hi,
                                                            std::numeric_limits<double>::digits / 2);
  return {result.first, -result.second};
}

}  // namespace flagvar
