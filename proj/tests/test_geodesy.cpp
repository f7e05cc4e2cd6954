#include <catch_amalgamated.hpp>

#include <random>

#include "flagvar/error.hpp"
#include "flagvar/geodesy.hpp"
#include "flagvar/spaces.hpp"
#include "flagvar/variation.hpp"
#include "oracles.hpp"

using namespace flagvar;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

RealizationPtr make(Family f, int l) { return build_realization(build_root_system(f, l)); }

LieElement el(const FlagPtr& flag, const std::string& label) {
  return LieElement::basis(flag->algebra(), flag->algebra()->parse_basis_label(label));
}

oracle::Dense dense(const CMatrix& m) {
  oracle::Dense d(static_cast<int>(m.rows()));
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j) d(i, j) = m(i, j);
  return d;
}

// Direct evaluation of B(X_m, [X, Z]_m) for every m-basis Z, using plain
// products and the trace pairing with the (orthogonal) A/S part of the basis.
double geodesic_oracle(const FlagSpace& flag, const InvariantMetric& lam, const LieElement& x) {
  const MatrixRealization& g = *flag.algebra();
  const oracle::Dense xd = dense(x.matrix());
  double worst = 0.0;
  for (int j : flag.m_indices()) {
    const oracle::Dense br = oracle::commutator(xd, dense(g.basis_element(j).matrix.dense(g.matrix_size())));
    double sum = 0.0;
    for (int i : flag.m_indices()) {
      const oracle::Dense bi = dense(g.basis_element(i).matrix.dense(g.matrix_size()));
      const double coeff = (g.killing_scale() * oracle::trace(oracle::multiply(br, bi))).real() / -2.0;
      sum += 2.0 * lam[flag.basis_component()[i]] * x[i] * coeff;
    }
    worst = std::max(worst, std::abs(sum));
  }
  return worst;
}

}  // namespace

TEST_CASE("normal metric makes every vector geodesic", "[geodesy][property]") {
  std::mt19937 rng(17);
  std::normal_distribution<double> normal;
  for (auto [f, l, theta] : {std::tuple{Family::C, 3, std::vector<int>{1, 2}}, {Family::A, 2, std::vector<int>{}},
                             {Family::A, 3, std::vector<int>{1}}}) {
    const FlagPtr flag = build_flag(make(f, l), theta);
    const InvariantMetric nm = InvariantMetric::normal(*flag, 1.7);
    for (int t = 0; t < 5; ++t) {
      Eigen::VectorXd c(flag->algebra()->dimension());
      for (int i = 0; i < c.size(); ++i) c[i] = normal(rng);
      CHECK(is_geodesic_vector(*flag, nm, project_m(*flag, LieElement(flag->algebra(), c))));
    }
  }
}

TEST_CASE("single-root vectors are equigeodesic", "[geodesy]") {
  const FlagPtr flag = build_flag(make(Family::C, 3), {1, 2});
  const InvariantMetric lam(*flag, {1.0, 2.0});
  for (int i : flag->m_indices()) {
    const LieElement x = LieElement::basis(flag->algebra(), i);
    CHECK(is_equigeodesic_vector(*flag, x));
    CHECK(is_geodesic_vector(*flag, lam, x));
  }
  CHECK(is_equigeodesic_vector(*cp_space(3), el(cp_space(3), "A11")));
  CHECK(is_equigeodesic_vector(*su3_maximal_flag(), el(su3_maximal_flag(), "A13")));
}

TEST_CASE("mixed vector under a generic metric", "[geodesy]") {
  const FlagPtr flag = build_flag(make(Family::C, 3), {1, 2});
  const InvariantMetric lam(*flag, {1.0, 2.0});
  const LieElement x = el(flag, "A12") + el(flag, "A11");
  const double oracle_residual = geodesic_oracle(*flag, lam, x);
  CHECK_THAT(geodesic_residual(*flag, lam, x), WithinAbs(oracle_residual, 1e-12));
  // [A12, A11] lands in m_1 with a nonzero coefficient, so the criterion fails
  CHECK(oracle_residual > 0.1);
  CHECK_FALSE(is_geodesic_vector(*flag, lam, x));
  CHECK_FALSE(is_equigeodesic_vector(*flag, x));
  CHECK(is_geodesic_vector(*flag, InvariantMetric::normal(*flag), x));
}

TEST_CASE("geodesic residual agrees with the direct oracle", "[geodesy][property]") {
  std::mt19937 rng(29);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> weight(0.2, 3.0);
  const FlagPtr flag = build_flag(make(Family::C, 3), {1, 2});
  for (int t = 0; t < 5; ++t) {
    Eigen::VectorXd c(flag->algebra()->dimension());
    for (int i = 0; i < c.size(); ++i) c[i] = normal(rng);
    const LieElement x = project_m(*flag, LieElement(flag->algebra(), c));
    const InvariantMetric lam(*flag, {weight(rng), weight(rng)});
    CHECK_THAT(geodesic_residual(*flag, lam, x), WithinAbs(geodesic_oracle(*flag, lam, x), 1e-10));
  }
}

TEST_CASE("equigeodesic implies geodesic for random metrics", "[geodesy][property]") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> weight(0.05, 5.0);
  const FlagPtr flag = su3_maximal_flag();
  const std::vector<LieElement> candidates{el(flag, "A13"), el(flag, "S12"), el(flag, "A12") + el(flag, "S12")};
  for (const LieElement& x : candidates) {
    REQUIRE(is_equigeodesic_vector(*flag, x));
    for (int t = 0; t < 100; ++t) {
      const InvariantMetric lam(*flag, {weight(rng), weight(rng), weight(rng)});
      CHECK(is_geodesic_vector(*flag, lam, x));
    }
  }
}

TEST_CASE("curve energy", "[geodesy]") {
  const FlagPtr flag = cp_space(2);
  const InvariantMetric nm = InvariantMetric::normal(*flag);
  CHECK_THAT(curve_energy(*flag, nm, el(flag, "A12"), 1.0), WithinAbs(2.0, 1e-15));
  CHECK(curve_energy(*flag, nm, LieElement::zero(flag->algebra()), 1.0) == 0.0);
  const InvariantMetric lam(*flag, {0.7, 1.9});
  const double a = 2.5;
  const LieElement x = el(flag, "A11") + el(flag, "S11");
  CHECK_THAT(curve_energy(*flag, lam, x, a), WithinAbs(4.0 * a * 1.9, 1e-13));
  // quadrature of |gamma'|^2 in the transported frame
  const AdjointTransport tr(x);
  const double quad = integrate(composite_rule(0.0, a, {}), [&](double t) {
    const LieElement v(flag->algebra(), tr.apply(t, x.coeffs()));
    return metric_product(lam, v, v);
  });
  CHECK_THAT(quad, WithinRel(curve_energy(*flag, lam, x, a), 1e-10));
  CHECK_THROWS_AS(curve_energy(*flag, lam, x, 0.0), Error);
}
