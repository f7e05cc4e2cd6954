#include "flagvar/geodesy.hpp"

#include <algorithm>
#include <cmath>

#include "flagvar/error.hpp"

namespace flagvar {

double geodesic_residual(const FlagSpace& flag, const InvariantMetric& lambda, const LieElement& x) {
  const MatrixRealization& g = *flag.algebra();
  const CMatrix xm = x.matrix();
  const LieElement x_m = project_m(flag, x);
  double worst = 0.0;
  for (int j : flag.m_indices()) {
    const LieElement z(x.algebra(), g.expand(g.commutator_with_basis(xm, j)));
    worst = std::max(worst, std::abs(metric_product(lambda, x_m, z)));
  }
  return worst;
}

bool is_geodesic_vector(const FlagSpace& flag, const InvariantMetric& lambda, const LieElement& x, double tol) {
  return geodesic_residual(flag, lambda, x) < tol;
}

double equigeodesic_residual(const FlagSpace& flag, const LieElement& x) {
  const int count = static_cast<int>(flag.components().size());
  double worst = 0.0;
  for (int s = 0; s < count; ++s) {
    Eigen::VectorXd part = Eigen::VectorXd::Zero(x.coeffs().size());
    for (int i : flag.m_indices())
      if (flag.basis_component()[i] == s) part[i] = x[i];
    const LieElement br = project_m(flag, bracket(x, LieElement(x.algebra(), part)));
    worst = std::max(worst, br.coeffs().cwiseAbs().maxCoeff());
  }
  return worst;
}

bool is_equigeodesic_vector(const FlagSpace& flag, const LieElement& x, double tol) {
  return equigeodesic_residual(flag, x) < tol;
}

double curve_energy(const FlagSpace& flag, const InvariantMetric& lambda, const LieElement& x, double a) {
  if (!(a > 0.0)) throw Error(ErrorKind::Domain, "curve length parameter must be positive");
  const LieElement xm = project_m(flag, x);
  return a * metric_product(lambda, xm, xm);
}

double curve_energy(const InvariantMetric& lambda, const HomogeneousCurve& curve) {
  return curve_energy(*curve.flag, lambda, curve.x, curve.a);
}

}  // namespace flagvar
