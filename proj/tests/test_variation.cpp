#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "flagvar/conjugacy.hpp"
#include "flagvar/error.hpp"
#include "flagvar/geodesy.hpp"
#include "flagvar/spaces.hpp"
#include "flagvar/variation.hpp"

using namespace flagvar;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const double pi = std::acos(-1.0);

LieElement el(const FlagPtr& flag, const std::string& label) {
  return LieElement::basis(flag->algebra(), flag->algebra()->parse_basis_label(label));
}

PerturbationPair cp_pair(const FlagPtr& flag) {
  const RootSystem& rs = flag->root_system();
  const Root alpha = rs.sum(1, 1);
  return {alpha, 1, rs.difference(1, 2), rs.sum(1, 2),
          flag->algebra()->structure_constant(-alpha, rs.difference(1, 2))};
}

// smooth proper variation mixing m and k directions
VariationCurve wobble(const FlagPtr& flag, double a) {
  const RealizationPtr& g = flag->algebra();
  std::vector<CurveTerm> terms;
  int count = 0;
  for (int i = 0; i < g->dimension(); ++i) {
    const double amp = 0.3 + 0.1 * (i % 4);
    // t (t - a) and sin(pi t / a) vanish at both ends
    if (count++ % 2 == 0)
      terms.push_back({i, ScalarProfile::polynomial({0.0, -a * amp, amp})});
    else
      terms.push_back({i, ScalarProfile::poly_sin({amp}, (1 + i % 3) * pi / a)});
  }
  return VariationCurve(g, a, std::move(terms));
}

}  // namespace

TEST_CASE("profile derivatives match finite differences", "[variation]") {
  const auto g = build_realization(build_root_system(Family::A, 2));
  const VariationCurve q(g, 2.0,
                         {{0, ScalarProfile::polynomial({1.0, -2.0, 0.5, 0.25})},
                          {1, ScalarProfile::poly_sin({0.0, 1.0}, 3.0)},
                          {2, ScalarProfile::poly_cos({2.0, 0.0, -1.0}, 1.5)},
                          {3, ScalarProfile::hat(0.4, 1.0, 1.7)},
                          {4, ScalarProfile::constant(3.0)}});
  CHECK(q.derivative_check() < 1e-8);
  CHECK(q.breakpoints() == std::vector<double>{0.4, 1.0, 1.7});
  CHECK(ScalarProfile::hat(0.0, 1.0, 2.0).value(0.5) == 0.5);
  CHECK(ScalarProfile::hat(0.0, 1.0, 2.0).value(2.5) == 0.0);
  CHECK_THROWS_AS(ScalarProfile::hat(1.0, 1.0, 2.0), Error);
  CHECK_THROWS_AS(VariationCurve(g, 0.0), Error);
  const VariationCurve sum = q + q * 2.0;
  CHECK((sum.value(0.77) - 3.0 * q.value(0.77)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("transport basics", "[variation]") {
  const FlagPtr flag = cp_space(2);
  const LieElement x = el(flag, "A11") + 0.4 * el(flag, "S13+");
  const LieElement a = el(flag, "A12") - 0.3 * el(flag, "IH23");
  CHECK((transport(x, 0.0, a) - a).coeffs().cwiseAbs().maxCoeff() < 1e-14);
  CHECK((transport(x, 1.3, x) - x).coeffs().cwiseAbs().maxCoeff() < 1e-12);
  const LieElement b = el(flag, "S12+") + el(flag, "A22");
  const LieElement ta = transport(x, 0.8, a), tb = transport(x, 0.8, b);
  CHECK_THAT(killing_form(ta, tb), WithinAbs(killing_form(a, b), 1e-10));
}

TEST_CASE("transport rotates A12 into A12+", "[variation]") {
  for (int n : {1, 2, 4}) {
    const FlagPtr flag = cp_space(n);
    const double m = std::sqrt(2.0 * n + 4.0) / (2.0 * n + 4.0);
    const LieElement x = el(flag, "A11");
    for (double t : {0.3, 1.0, 5.0}) {
      const LieElement expected = std::cos(m * t) * el(flag, "A12") + std::sin(m * t) * el(flag, "A12+");
      CHECK((transport(x, t, el(flag, "A12")) - expected).coeffs().cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("transport paths agree on random inputs", "[variation][property]") {
  std::mt19937 rng(41);
  std::normal_distribution<double> normal;
  for (const FlagPtr& flag : {cp_space(1), su3_maximal_flag(), cp_space(3)}) {
    const RealizationPtr& g = flag->algebra();
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd xc(g->dimension()), ac(g->dimension());
      for (int i = 0; i < xc.size(); ++i) {
        xc[i] = normal(rng);
        ac[i] = normal(rng);
      }
      const LieElement x(g, xc), a(g, ac);
      const double t = 0.5 + trial;
      const LieElement adj = transport(x, t, a);  // throws on disagreement
      const AdjointTransport tr(x);
      CHECK((tr.apply(t, ac) - adj.coeffs()).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((tr.ad_exponential(t) * ac - adj.coeffs()).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("geodesic X pairs transported vectors with X independently of t", "[variation][property]") {
  const FlagPtr flag = cp_space(2);
  const InvariantMetric lam(*flag, {0.6, 1.0});
  const LieElement x = el(flag, "A11");
  REQUIRE(is_geodesic_vector(*flag, lam, x));
  const LieElement a = el(flag, "A12") + el(flag, "S11") - 0.5 * el(flag, "A11") + el(flag, "IH12");
  const double ref = metric_product(lam, project_m(*flag, a), x);
  double worst = 0.0;
  for (int k = 0; k <= 40; ++k) {
    const LieElement ta = transport(x, 0.25 * k, a);
    worst = std::max(worst, std::abs(metric_product(lam, project_m(*flag, ta), x) - ref));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("properness", "[variation]") {
  const FlagPtr flag = cp_space(1);
  const LieElement x = el(flag, "A11");
  CHECK(is_proper(*flag, x, build_q0(*flag, cp_pair(flag), 2.0, 1.0)));
  CHECK(is_proper(*flag, x, VariationCurve::constant(el(flag, "A22"), 1.0)));
  CHECK_FALSE(is_proper(*flag, x, VariationCurve::constant(el(flag, "A12"), 1.0)));
  CHECK_FALSE(is_proper(*flag, x, VariationCurve::linear(el(flag, "A12"), 1.0)));
}

TEST_CASE("energy of a variation", "[variation]") {
  const FlagPtr flag = cp_space(1);
  const InvariantMetric nm = InvariantMetric::normal(*flag);
  const LieElement x = el(flag, "A11");
  const VariationCurve q0 = build_q0(*flag, cp_pair(flag), 1.0, 1.0);
  CHECK(variation_energy(*flag, nm, x, q0, 0.0) == curve_energy(*flag, nm, x, 1.0));
  const VariationCurve kconst = VariationCurve::constant(el(flag, "A22") + el(flag, "IH12"), 1.0);
  CHECK_THAT(variation_energy(*flag, nm, x, kconst, 0.37), WithinAbs(curve_energy(*flag, nm, x, 1.0), 1e-13));
  CHECK_THROWS_AS(variation_energy(*flag, nm, x, q0, 50.0), Error);
  try {
    variation_energy(*flag, nm, x, q0, 50.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Accuracy);
  }
}

TEST_CASE("second difference of the energy matches the index form", "[variation][oracle]") {
  const double h = 1e-3;
  for (const FlagPtr& flag : {cp_space(1), cp_space(2)}) {
    const InvariantMetric lam(*flag, {0.8, 1.0});
    const LieElement x = el(flag, "A11");
    for (const VariationCurve& q : {build_q0(*flag, cp_pair(flag), 1.5, 0.7), wobble(flag, 1.2)}) {
      const double e0 = variation_energy(*flag, lam, x, q, 0.0);
      const double fd = (variation_energy(*flag, lam, x, q, h) - 2.0 * e0 + variation_energy(*flag, lam, x, q, -h)) /
                        (h * h);
      CHECK_THAT(fd, WithinRel(index_form(*flag, lam, x, q), 1e-4));
    }
  }
}

TEST_CASE("first variation", "[variation]") {
  const FlagPtr flag = cp_space(1);
  const InvariantMetric nm = InvariantMetric::normal(*flag);
  const LieElement x = el(flag, "A11");
  CHECK(std::abs(first_variation(*flag, nm, x, wobble(flag, 1.3))) < 1e-10);
  CHECK(std::abs(first_variation(*flag, nm, x, build_q0(*flag, cp_pair(flag), 2.0, 1.0))) < 1e-10);
  CHECK(first_variation(*flag, nm, x, VariationCurve::constant(el(flag, "A12"), 1.0)) == 0.0);
  CHECK_THAT(first_variation(*flag, nm, x, VariationCurve::linear(x, 1.0)), WithinAbs(4.0, 1e-12));
  const LieElement w = el(flag, "A11") + el(flag, "S12");
  const InvariantMetric lam(*flag, {0.5, 1.5});
  CHECK_THAT(first_variation(*flag, lam, x, VariationCurve::linear(w, 2.0)),
             WithinAbs(2.0 * 2.0 * metric_product(lam, w, x), 1e-12));
}

TEST_CASE("index form on the CP witness", "[variation]") {
  for (int n : {1, 2, 10}) {
    const FlagPtr flag = cp_space(n);
    const double m = std::sqrt(2.0 * n + 4.0) / (2.0 * n + 4.0);
    const LieElement x = el(flag, "A11");
    for (auto [b, k] : {std::pair{1.0, 1.0}, {2.5, 0.6}}) {
      const MNDecomposition mn = mn_decomposition(*flag, x, cp_pair(flag), b, k);
      CHECK_THAT(mn.n, WithinRel(n_closed_form(b, k), 1e-10));
      CHECK_THAT(mn.m - 4.0 * mn.n, WithinRel(-8.0 * m * b * b / pi, 1e-8));
    }
  }
  const FlagPtr flag = cp_space(1);
  const MNDecomposition mn = mn_decomposition(*flag, el(flag, "A11"), cp_pair(flag), 1.0, 1.0);
  CHECK_THAT(mn.m, WithinAbs(79.25057281, 1e-7));
  CHECK_THAT(mn.n, WithinAbs(20.07254214, 1e-7));
}

TEST_CASE("index form preconditions and trivial values", "[variation][errors]") {
  const FlagPtr flag = build_flag(build_realization(build_root_system(Family::C, 3)), {1, 2});
  const InvariantMetric lam(*flag, {1.0, 2.0});
  const LieElement bad = el(flag, "A12") + el(flag, "A11");
  const VariationCurve q = wobble(flag, 1.0);
  try {
    index_form(*flag, lam, bad, q);
    FAIL("expected precondition error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }
  CHECK(index_form(*flag, lam, el(flag, "A11"), VariationCurve::zero(flag->algebra(), 1.0)) == 0.0);
}

TEST_CASE("index bilinear form", "[variation][property]") {
  const FlagPtr flag = cp_space(1);
  const InvariantMetric lam(*flag, {0.7, 1.0});
  const LieElement x = el(flag, "A11");
  const VariationCurve q1 = build_q0(*flag, cp_pair(flag), 2.0, 0.8);
  const VariationCurve q2 = wobble(flag, 2.0);
  const double i1 = index_form(*flag, lam, x, q1), i2 = index_form(*flag, lam, x, q2);
  const double b12 = index_bilinear(*flag, lam, x, q1, q2), b21 = index_bilinear(*flag, lam, x, q2, q1);
  CHECK_THAT(b12, WithinAbs(b21, 1e-12 * std::abs(b12)));
  CHECK_THAT(index_bilinear(*flag, lam, x, q1, q1), WithinRel(i1, 1e-12));
  CHECK(index_bilinear(*flag, lam, x, q1, VariationCurve::zero(flag->algebra(), 2.0)) == 0.0);
  CHECK_THAT((index_form(*flag, lam, x, q1 + q2) - i1 - i2) / 2.0, WithinAbs(b12, 1e-9 * std::max(1.0, std::abs(b12))));
}

TEST_CASE("quadrature refinement is converged", "[variation]") {
  const FlagPtr flag = cp_space(2);
  const InvariantMetric lam(*flag, {0.9, 1.0});
  const LieElement x = el(flag, "A11");
  const VariationCurve q = build_q0(*flag, cp_pair(flag), 3.0, 1.1);
  const double coarse = index_form(*flag, lam, x, q, {16, 8});
  const double fine = index_form(*flag, lam, x, q, {16, 16});
  CHECK(std::abs(coarse - fine) < 1e-10 * std::max(1.0, std::abs(fine)));
  const double e_coarse = variation_energy(*flag, lam, x, q, 0.01, {16, 8});
  const double e_fine = variation_energy(*flag, lam, x, q, 0.01, {16, 16});
  CHECK(std::abs(e_coarse - e_fine) < 1e-10 * std::abs(e_fine));
}

TEST_CASE("perturbation formula", "[variation]") {
  const FlagPtr flag = cp_space(1);
  const InvariantMetric nm = InvariantMetric::normal(*flag);
  const LieElement x = el(flag, "A11");
  const VariationCurve q0 = build_q0(*flag, cp_pair(flag), 1.0, 1.0);
  CHECK_THAT(perturbed_index(*flag, nm, {1}, {0.0, 0.0}, x, q0), WithinRel(index_form(*flag, nm, x, q0), 1e-14));
  const MNDecomposition mn = mn_decomposition(*flag, x, cp_pair(flag), 1.0, 1.0);
  double previous = -1e300;
  for (double xi : {-0.99, -0.5, 0.0, 0.7}) {
    const PerturbedIndex r = perturbed_index_report(*flag, nm, {1}, {xi, 0.0}, x, q0);
    CHECK_THAT(r.formula, WithinRel(mn.m + 4.0 * xi * mn.n, 1e-10));
    CHECK_THAT(r.formula, WithinRel(r.direct, 1e-8));
    CHECK(r.formula > previous);
    previous = r.formula;
  }
  try {
    perturbed_index(*flag, nm, {0}, {0.0, 0.3}, x, q0);  // X not subordinated
    FAIL("expected usage error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Usage);
  }
}
