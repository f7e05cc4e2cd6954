#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "flagvar/error.hpp"
#include "flagvar/numerics.hpp"

using namespace flagvar;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("expm of a rotation generator", "[numerics]") {
  for (double theta : {0.0, 0.3, 2.0, 40.0}) {
    Eigen::MatrixXd a(2, 2);
    a << 0, -theta, theta, 0;
    const Eigen::MatrixXd e = expm(a);
    CHECK_THAT(e(0, 0), WithinAbs(std::cos(theta), 1e-12));
    CHECK_THAT(e(1, 0), WithinAbs(std::sin(theta), 1e-12));
  }
}

TEST_CASE("expm against a truncated Taylor series", "[numerics]") {
  std::mt19937 rng(3);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(5, 5);
  for (int i = 0; i < 25; ++i) a.data()[i] = 0.3 * normal(rng);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(5, 5), sum = term;
  for (int k = 1; k < 40; ++k) {
    term = term * a / k;
    sum += term;
  }
  CHECK((expm(a) - sum).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((expm(a) * expm(-a) - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Gauss-Legendre rules", "[numerics]") {
  const QuadratureRule r = gauss_legendre(16);
  double w = 0.0;
  for (double x : r.weights) w += x;
  CHECK_THAT(w, WithinAbs(2.0, 1e-14));
  // exact for degree 31
  double s = 0.0;
  for (std::size_t i = 0; i < r.points.size(); ++i) s += r.weights[i] * std::pow(r.points[i], 30);
  CHECK_THAT(s, WithinRel(2.0 / 31.0, 1e-13));
  CHECK_THROWS_AS(gauss_legendre(0), Error);
}

TEST_CASE("composite rule with breakpoints", "[numerics]") {
  const QuadratureRule r = composite_rule(0.0, 2.0, {4, 3}, {0.5, 1.25, 3.0});
  // panels [0,2/3,4/3,2] split at 0.5 and 1.25 -> 5 pieces
  CHECK(r.points.size() == 20);
  const double v = integrate(r, [](double t) { return std::abs(t - 0.5) + std::abs(t - 1.25); });
  // piecewise linear integrands are exact once kinks are panel edges
  CHECK_THAT(v, WithinAbs(0.125 + 1.125 + (1.25 * 1.25 / 2 + 0.75 * 0.75 / 2), 1e-13));
  const double smooth = integrate(composite_rule(0.0, 3.0, {}), [](double t) { return std::exp(t); });
  CHECK_THAT(smooth, WithinRel(std::exp(3.0) - 1.0, 1e-14));
}

TEST_CASE("Jacobi eigenvalues match a library eigensolver", "[numerics][property]") {
  std::mt19937 rng(11);
  std::normal_distribution<double> normal;
  for (int n : {1, 2, 7, 40}) {
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n * n; ++i) a.data()[i] = normal(rng);
    a = (a + a.transpose()).eval();
    const Eigen::VectorXd mine = jacobi_eigenvalues(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    CHECK((mine - es.eigenvalues()).cwiseAbs().maxCoeff() < 1e-11 * std::max(1.0, a.norm()));
  }
}

TEST_CASE("maximize finds interior maxima", "[numerics]") {
  const Extremum e = maximize([](double x) { return -(x - 0.7) * (x - 0.7) + 3.0; }, 0.0, 5.0);
  CHECK_THAT(e.argument, WithinAbs(0.7, 1e-7));
  CHECK_THAT(e.value, WithinAbs(3.0, 1e-14));
}
