#include "flagvar/conjugacy.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/constants/constants.hpp>
#include <Eigen/Eigenvalues>

#include "flagvar/error.hpp"
#include "flagvar/geodesy.hpp"

namespace flagvar {

namespace {
constexpr double pi = boost::math::constants::pi<double>();
}

bool is_perturbation_pair(const FlagSpace& flag, const Root& alpha, const Root& beta, const Root& delta,
                          PairMode mode) {
  const RootSystem& rs = flag.root_system();
  if (beta == delta) return false;
  if (!flag.in_complement(beta) || !flag.in_complement(delta)) return false;
  const int sigma0 = flag.component_of(alpha);
  if (flag.component_of(beta) == sigma0 || flag.component_of(delta) == sigma0) return false;
  if (beta + delta != alpha) return false;
  if (rs.contains(alpha + beta) || rs.contains(alpha + delta)) return false;
  if (flag.in_complement(beta - delta)) return false;
  if (mode == PairMode::Symmetric && flag.in_complement(delta - beta)) return false;
  return true;
}

std::vector<PerturbationPair> find_perturbation_pairs(const FlagSpace& flag, const Root& alpha, PairMode mode) {
  if (!flag.in_complement(alpha))
    throw Error(ErrorKind::Usage, flag.root_system().label(alpha) + " is not a positive root outside the span");
  const MatrixRealization& g = *flag.algebra();
  const std::vector<Root>& cand = flag.complement();
  std::vector<PerturbationPair> out;
  for (std::size_t i = 0; i < cand.size(); ++i)
    for (std::size_t j = i + 1; j < cand.size(); ++j)
      if (is_perturbation_pair(flag, alpha, cand[i], cand[j], mode))
        out.push_back({alpha, flag.component_of(alpha), cand[i], cand[j], g.structure_constant(-alpha, cand[i])});
  return out;
}

VariationCurve build_q0(const FlagSpace& flag, const PerturbationPair& pair, double b, double k) {
  if (k == 0.0) throw Error(ErrorKind::Usage, "k must be nonzero");
  if (!(b > 0.0)) throw Error(ErrorKind::Domain, "b must be positive");
  const MatrixRealization& g = *flag.algebra();
  Root wave = pair.beta, bump = pair.delta;
  if (pair.rate < 0.0) std::swap(wave, bump);
  std::vector<CurveTerm> terms{
      {g.index_of(BasisKind::A, wave), ScalarProfile::poly_sin({k}, 2.0 * pi / b)},
      {g.index_of(BasisKind::A, bump), ScalarProfile::polynomial({0.0, -b / k, 1.0 / k})},
  };
  return VariationCurve(flag.algebra(), b, std::move(terms));
}

Interval xi_interval(double m, double n) {
  if (!(n > 0.0)) throw Error(ErrorKind::Domain, "N must be positive");
  if (m >= 4.0 * n) throw Error(ErrorKind::Infeasible, "M >= 4N leaves no admissible xi");
  return {-1.0, -m / (4.0 * n)};
}

double n_closed_form(double b, double k) {
  return (std::pow(b, 4) + 6.0 * pi * pi * std::pow(k, 4)) / (3.0 * k * k * b);
}

OptimalK optimal_k(double b, double m, const QuadratureConfig& quad) {
  if (!(b > 0.0) || !(m > 0.0)) throw Error(ErrorKind::Domain, "optimal k needs b > 0 and m > 0");
  OptimalK out;
  out.k_star = b / (std::pow(6.0, 0.25) * std::sqrt(pi));
  out.max_ratio = b * m * std::sqrt(6.0) / (2.0 * pi * pi);
  const QuadratureRule rule = composite_rule(0.0, b, quad);
  auto ratio = [&](double k) {
    const double n = integrate(rule, [&](double t) {
      const double u = 2.0 * pi * k / b * std::cos(2.0 * pi * t / b);
      const double v = (2.0 * t - b) / k;
      return u * u + v * v;
    });
    return (8.0 * m * b * b / pi) / (4.0 * n);
  };
  const Extremum best = maximize(ratio, 1e-3 * b, 10.0 * b);
  out.numeric_k = best.argument;
  out.numeric_ratio = best.value;
  return out;
}

ConjugateWitness assemble_witness(const FlagPtr& flag, const PerturbationPair& pair, double b, double k,
                                  std::optional<double> xi, const QuadratureConfig& quad) {
  const RealizationPtr& g = flag->algebra();
  const LieElement x = LieElement::basis(g, BasisKind::A, pair.alpha);
  const MNDecomposition mn = mn_decomposition(*flag, x, pair, b, k, quad);
  const Interval range = xi_interval(mn.m, mn.n);
  const double chosen = xi.value_or(range.midpoint());

  const int count = static_cast<int>(flag->components().size());
  std::vector<double> shift(count, chosen);
  shift[pair.sigma0] = 0.0;
  const InvariantMetric normal = InvariantMetric::normal(*flag);
  const InvariantMetric sharp = p_perturb(*flag, normal, {pair.sigma0}, shift);
  const VariationCurve q0 = build_q0(*flag, pair, b, k);
  const PerturbedIndex idx = perturbed_index_report(*flag, normal, {pair.sigma0}, shift, x, q0, quad);

  ConjugateWitness w{flag, pair.alpha, pair, b, k, chosen, mn.m, mn.n, range, idx, sharp};
  const double scale = std::max({std::abs(w.closed_form()), std::abs(mn.m), 1.0});
  if (std::abs(w.value() - w.closed_form()) > 1e-8 * scale)
    throw Error(ErrorKind::Consistency, "index differs from M + 4 xi N");
  return w;
}

ConjugateWitness conjugate_witness(const FlagPtr& flag, const PerturbationPair& pair, double b, double k,
                                   std::optional<double> xi, const QuadratureConfig& quad) {
  ConjugateWitness w = assemble_witness(flag, pair, b, k, xi, quad);
  if (!(w.value() < 0.0))
    throw Error(ErrorKind::Witness, "index form is not negative (I = " + std::to_string(w.value()) + ")");
  return w;
}

nlohmann::json to_json(const ConjugateWitness& w) {
  const RootSystem& rs = w.flag->root_system();
  nlohmann::json doc;
  doc["flag"] = to_json(*w.flag);
  doc["alpha"] = rs.label(w.alpha);
  doc["beta"] = rs.label(w.pair.beta);
  doc["delta"] = rs.label(w.pair.delta);
  doc["rate"] = w.pair.rate;
  doc["b"] = w.b;
  doc["k"] = w.k;
  doc["xi"] = w.xi;
  doc["xi_interval"] = {w.xi_range.lo, w.xi_range.hi};
  doc["M"] = w.m;
  doc["N"] = w.n;
  doc["I"] = w.value();
  doc["I_direct"] = w.index.direct;
  doc["lambda_sharp"] = w.sharp.lambda();
  return doc;
}

GramProblem index_gram(const FlagSpace& flag, const InvariantMetric& lambda, const LieElement& x, double b,
                       int mesh, std::vector<int> subset, int nodes_per_element) {
  if (mesh < 4) throw Error(ErrorKind::Usage, "mesh must have at least 4 elements");
  if (!(b > 0.0)) throw Error(ErrorKind::Domain, "b must be positive");
  if (!is_geodesic_vector(flag, lambda, x))
    throw Error(ErrorKind::Precondition, "X is not a geodesic vector");
  const MatrixRealization& g = *x.algebra();
  if (subset.empty())
    for (int i = 0; i < g.dimension(); ++i) subset.push_back(i);
  const int s = static_cast<int>(subset.size());
  const int dim = g.dimension();
  const double h = b / mesh;
  const Eigen::VectorXd w = lambda.weights();
  const Eigen::VectorXd wx = (w.array() * x.coeffs().array()).matrix();

  // C_ab = B([E_a, E_b], X)
  Eigen::MatrixXd twist(s, s);
  for (int p = 0; p < s; ++p) {
    const CMatrix ea = g.basis_element(subset[p]).matrix.dense(g.matrix_size());
    for (int q = 0; q < s; ++q) twist(p, q) = g.expand(g.commutator_with_basis(ea, subset[q])).dot(wx);
  }

  const AdjointTransport tr(x);
  const QuadratureRule base = gauss_legendre(nodes_per_element);
  const int interior = mesh - 1;
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(interior * s, interior * s);
  for (int e = 0; e < mesh; ++e) {
    Eigen::MatrixXd p_e = Eigen::MatrixXd::Zero(s, s);
    for (std::size_t k = 0; k < base.points.size(); ++k) {
      const double t = e * h + 0.5 * h * (1.0 + base.points[k]);
      const CMatrix u = tr.group_element(t);
      Eigen::MatrixXd frame(dim, s);
      for (int p = 0; p < s; ++p)
        frame.col(p) = g.expand(u * g.basis_element(subset[p]).matrix.dense(g.matrix_size()) * u.adjoint());
      p_e += 0.5 * h * base.weights[k] * frame.transpose() * w.asDiagonal() * frame;
    }
    // local nodes e (slope -1/h) and e + 1 (slope +1/h); interior node j sits at row block j - 1
    const int nodes[2] = {e, e + 1};
    const double slope[2] = {-1.0 / h, 1.0 / h};
    for (int l = 0; l < 2; ++l) {
      for (int r = 0; r < 2; ++r) {
        const int j = nodes[l], k = nodes[r];
        if (j == 0 || j == mesh || k == 0 || k == mesh) continue;
        auto block = gram.block((j - 1) * s, (k - 1) * s, s, s);
        block += 2.0 * slope[l] * slope[r] * p_e;
        if (l == 0 && r == 1) block += twist;
        if (l == 1 && r == 0) block -= twist;
      }
    }
  }

  GramProblem out;
  out.mesh = mesh;
  out.b = b;
  out.subset = subset;
  const double asym = (gram - gram.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, gram.cwiseAbs().maxCoeff()))
    throw Error(ErrorKind::Consistency, "index Gram matrix is not symmetric");
  out.matrix = 0.5 * (gram + gram.transpose());

  // reduce G v = mu K v, K the Gram matrix of int <q1', q2'>, to standard form
  Eigen::MatrixXd stiffness = Eigen::MatrixXd::Zero(interior, interior);
  for (int j = 0; j < interior; ++j) {
    stiffness(j, j) = 2.0 / h;
    if (j + 1 < interior) stiffness(j, j + 1) = stiffness(j + 1, j) = -1.0 / h;
  }
  const Eigen::MatrixXd l1 = stiffness.llt().matrixL();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(interior * s, interior * s);
  for (int j = 0; j < interior; ++j)
    for (int k = 0; k <= j; ++k)
      if (l1(j, k) != 0.0) l.block(j * s, k * s, s, s).diagonal().setConstant(l1(j, k));
  Eigen::MatrixXd reduced = l.triangularView<Eigen::Lower>().solve(out.matrix);
  reduced = l.triangularView<Eigen::Lower>().solve(reduced.transpose()).eval();
  out.reduced = 0.5 * (reduced + reduced.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.reduced, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = es.eigenvalues()[0];
  out.norm = es.eigenvalues().cwiseAbs().maxCoeff();
  out.min_eigenvalue_jacobi = jacobi_eigenvalues(out.reduced)[0];
  if (std::abs(out.min_eigenvalue - out.min_eigenvalue_jacobi) > 1e-9 * std::max(1.0, out.norm))
    throw Error(ErrorKind::Consistency, "eigenvalue routes disagree");
  return out;
}

ConjugateEstimate first_conjugate_estimate(const FlagSpace& flag, const InvariantMetric& lambda,
                                           const LieElement& x, double lo, double hi, int mesh,
                                           std::vector<int> subset, double rel_tol, double width) {
  if (!(0.0 < lo && lo < hi)) throw Error(ErrorKind::Usage, "bracket must satisfy 0 < lo < hi");
  int evaluations = 0;
  auto negative = [&](double b) {
    ++evaluations;
    return index_gram(flag, lambda, x, b, mesh, subset).has_negative_direction(rel_tol);
  };
  if (negative(lo) || !negative(hi))
    throw Error(ErrorKind::Bracket, "no onset of a negative direction inside the bracket");
  while ((hi - lo) / hi >= width) {
    const double mid = 0.5 * (lo + hi);
    (negative(mid) ? hi : lo) = mid;
  }
  return {0.5 * (lo + hi), lo, hi, evaluations};
}

}  // namespace flagvar
