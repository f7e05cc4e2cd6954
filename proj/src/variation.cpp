#include "flagvar/variation.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "flagvar/conjugacy.hpp"
#include "flagvar/error.hpp"
#include "flagvar/geodesy.hpp"

namespace flagvar {

namespace {

double horner(const std::vector<double>& c, double t) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
  return v;
}

std::vector<double> differentiate(const std::vector<double>& c) {
  std::vector<double> d;
  for (std::size_t i = 1; i < c.size(); ++i) d.push_back(static_cast<double>(i) * c[i]);
  return d;
}

}  // namespace

ScalarProfile ScalarProfile::constant(double c) { return polynomial({c}); }

ScalarProfile ScalarProfile::polynomial(std::vector<double> coeffs) {
  ScalarProfile p;
  p.kind_ = Kind::Polynomial;
  p.coeffs_ = std::move(coeffs);
  return p;
}

ScalarProfile ScalarProfile::poly_sin(std::vector<double> coeffs, double omega) {
  ScalarProfile p = polynomial(std::move(coeffs));
  p.kind_ = Kind::PolySin;
  p.omega_ = omega;
  return p;
}

ScalarProfile ScalarProfile::poly_cos(std::vector<double> coeffs, double omega) {
  ScalarProfile p = poly_sin(std::move(coeffs), omega);
  p.kind_ = Kind::PolyCos;
  return p;
}

ScalarProfile ScalarProfile::hat(double left, double peak, double right) {
  if (!(left < peak && peak < right)) throw Error(ErrorKind::Usage, "hat needs left < peak < right");
  ScalarProfile p;
  p.kind_ = Kind::Hat;
  p.left_ = left;
  p.peak_ = peak;
  p.right_ = right;
  return p;
}

double ScalarProfile::value(double t) const {
  switch (kind_) {
    case Kind::Polynomial: return horner(coeffs_, t);
    case Kind::PolySin: return horner(coeffs_, t) * std::sin(omega_ * t);
    case Kind::PolyCos: return horner(coeffs_, t) * std::cos(omega_ * t);
    case Kind::Hat:
      if (t <= left_ || t >= right_) return 0.0;
      return height_ * (t <= peak_ ? (t - left_) / (peak_ - left_) : (right_ - t) / (right_ - peak_));
  }
  return 0.0;
}

double ScalarProfile::derivative(double t) const {
  switch (kind_) {
    case Kind::Polynomial: return horner(differentiate(coeffs_), t);
    case Kind::PolySin:
      return horner(differentiate(coeffs_), t) * std::sin(omega_ * t) +
             omega_ * horner(coeffs_, t) * std::cos(omega_ * t);
    case Kind::PolyCos:
      return horner(differentiate(coeffs_), t) * std::cos(omega_ * t) -
             omega_ * horner(coeffs_, t) * std::sin(omega_ * t);
    case Kind::Hat:
      if (t < left_ || t > right_) return 0.0;
      return t < peak_ ? height_ / (peak_ - left_) : -height_ / (right_ - peak_);
  }
  return 0.0;
}

std::vector<double> ScalarProfile::breakpoints() const {
  if (kind_ == Kind::Hat) return {left_, peak_, right_};
  return {};
}

ScalarProfile ScalarProfile::scaled(double s) const {
  ScalarProfile p = *this;
  for (double& c : p.coeffs_) c *= s;
  p.height_ *= s;
  return p;
}

VariationCurve::VariationCurve(RealizationPtr algebra, double a, std::vector<CurveTerm> terms)
    : algebra_(std::move(algebra)), a_(a), terms_(std::move(terms)) {
  if (!(a_ > 0.0)) throw Error(ErrorKind::Domain, "interval end must be positive");
  for (const CurveTerm& term : terms_)
    if (term.basis_index < 0 || term.basis_index >= algebra_->dimension())
      throw Error(ErrorKind::Usage, "curve term refers to a missing basis element");
}

VariationCurve VariationCurve::zero(RealizationPtr algebra, double a) { return VariationCurve(std::move(algebra), a); }

VariationCurve VariationCurve::constant(const LieElement& z, double a) {
  std::vector<CurveTerm> terms;
  for (int i = 0; i < z.coeffs().size(); ++i)
    if (z[i] != 0.0) terms.push_back({i, ScalarProfile::constant(z[i])});
  return VariationCurve(z.algebra(), a, std::move(terms));
}

VariationCurve VariationCurve::linear(const LieElement& w, double a) {
  std::vector<CurveTerm> terms;
  for (int i = 0; i < w.coeffs().size(); ++i)
    if (w[i] != 0.0) terms.push_back({i, ScalarProfile::polynomial({0.0, w[i]})});
  return VariationCurve(w.algebra(), a, std::move(terms));
}

Eigen::VectorXd VariationCurve::value(double t) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(algebra_->dimension());
  for (const CurveTerm& term : terms_) v[term.basis_index] += term.profile.value(t);
  return v;
}

Eigen::VectorXd VariationCurve::derivative(double t) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(algebra_->dimension());
  for (const CurveTerm& term : terms_) v[term.basis_index] += term.profile.derivative(t);
  return v;
}

std::vector<double> VariationCurve::breakpoints() const {
  std::vector<double> out;
  for (const CurveTerm& term : terms_)
    for (double b : term.profile.breakpoints()) out.push_back(b);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double VariationCurve::derivative_check(int samples, double h) const {
  const std::vector<double> kinks = breakpoints();
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = a_ * (i + 0.5) / samples;
    const bool near_kink =
        std::any_of(kinks.begin(), kinks.end(), [&](double k) { return std::abs(k - t) <= 2.0 * h; });
    if (near_kink) continue;
    const Eigen::VectorXd fd = (value(t + h) - value(t - h)) / (2.0 * h);
    worst = std::max(worst, (fd - derivative(t)).cwiseAbs().maxCoeff());
  }
  return worst;
}

VariationCurve VariationCurve::operator+(const VariationCurve& other) const {
  std::vector<CurveTerm> terms = terms_;
  terms.insert(terms.end(), other.terms_.begin(), other.terms_.end());
  return VariationCurve(algebra_, a_, std::move(terms));
}

VariationCurve VariationCurve::operator*(double s) const {
  std::vector<CurveTerm> terms;
  for (const CurveTerm& term : terms_) terms.push_back({term.basis_index, term.profile.scaled(s)});
  return VariationCurve(algebra_, a_, std::move(terms));
}

AdjointTransport::AdjointTransport(const LieElement& x) : x_(x), ad_(ad_matrix(x)) {
  // X is skew-Hermitian, so iX is Hermitian
  const CMatrix h = Complex(0.0, 1.0) * x.matrix();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  vectors_ = es.eigenvectors();
  phases_ = es.eigenvalues();
}

CMatrix AdjointTransport::group_element(double t) const {
  Eigen::VectorXcd d(phases_.size());
  for (int i = 0; i < phases_.size(); ++i) d[i] = std::exp(Complex(0.0, -t * phases_[i]));
  return vectors_ * d.asDiagonal() * vectors_.adjoint();
}

Eigen::VectorXd AdjointTransport::apply(double t, const Eigen::VectorXd& v) const {
  const MatrixRealization& g = *x_.algebra();
  const CMatrix u = group_element(t);
  return g.expand(u * g.to_matrix(v) * u.adjoint());
}

Eigen::MatrixXd AdjointTransport::ad_exponential(double t) const { return expm(t * ad_); }

LieElement transport(const LieElement& x, double t, const LieElement& a, double tol) {
  if (!x.compatible(a)) throw Error(ErrorKind::Usage, "elements belong to different algebras");
  const MatrixRealization& g = *x.algebra();
  const Eigen::VectorXd adjoint_side = expm(t * ad_matrix(x)) * a.coeffs();
  const CMatrix u = (t * x.matrix()).exp();
  const Eigen::VectorXd group_side = g.expand(u * a.matrix() * u.inverse());
  const double gap = (adjoint_side - group_side).cwiseAbs().maxCoeff();
  const double ref = std::max(1.0, a.coeffs().cwiseAbs().maxCoeff());
  if (gap > tol * ref)
    throw Error(ErrorKind::Consistency, "transport paths disagree by " + std::to_string(gap));
  return LieElement(x.algebra(), adjoint_side);
}

bool is_proper(const FlagSpace& flag, const LieElement& x, const VariationCurve& q, double tol) {
  const AdjointTransport tr(x);
  const Eigen::VectorXd start = q.value(0.0);
  const Eigen::VectorXd end = tr.apply(q.a(), q.value(q.a()));
  for (int i : flag.m_indices())
    if (std::abs(start[i]) > tol || std::abs(end[i]) > tol) return false;
  return true;
}

namespace {

void require_geodesic(const FlagSpace& flag, const InvariantMetric& lambda, const LieElement& x) {
  const double r = geodesic_residual(flag, lambda, x);
  if (!(r < 1e-10))
    throw Error(ErrorKind::Precondition, "X is not a geodesic vector (residual " + std::to_string(r) + ")");
}

QuadratureRule rule_for(const VariationCurve& q, const QuadratureConfig& quad) {
  return composite_rule(0.0, q.a(), quad, q.breakpoints());
}

QuadratureRule rule_for(const VariationCurve& q1, const VariationCurve& q2, const QuadratureConfig& quad) {
  std::vector<double> kinks = q1.breakpoints();
  for (double b : q2.breakpoints()) kinks.push_back(b);
  return composite_rule(0.0, q1.a(), quad, kinks);
}

Eigen::VectorXd bracket_coeffs(const MatrixRealization& g, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  const CMatrix a = g.to_matrix(u);
  const CMatrix b = g.to_matrix(v);
  return g.expand(a * b - b * a);
}

}  // namespace

double variation_energy(const FlagSpace& flag, const InvariantMetric& lambda, const LieElement& x,
                        const VariationCurve& q, double s, const QuadratureConfig& quad,
                        const SeriesConfig& series) {
  const MatrixRealization& g = *x.algebra();
  const AdjointTransport tr(x);
  const Eigen::ArrayXd w = lambda.weights().array();
  const Eigen::ArrayXd xc = x.coeffs().array();
  const double base = curve_energy(flag, lambda, x, q.a());
  if (s == 0.0) return base;

  const QuadratureRule rule = rule_for(q, quad);
  const double extra = integrate(rule, [&](double t) {
    const CMatrix sq = s * g.to_matrix(q.value(t));
    CMatrix term = s * g.to_matrix(q.derivative(t));
    const double lead = term.norm();
    CMatrix c = term;
    for (int n = 1; n < series.terms; ++n) {
      term = (sq * term - term * sq) / static_cast<double>(n + 1);
      c += term;
    }
    // tail of sum_{n >= terms} |2 sq|^n |s q'| / (n+1)!
    const double r = 2.0 * sq.norm();
    const double cap = series.terms + 2.0;
    double bound = std::numeric_limits<double>::infinity();
    if (r < cap) bound = lead * std::exp(series.terms * std::log(std::max(r, 1e-300)) -
                                         std::lgamma(series.terms + 2.0)) / (1.0 - r / cap);
    if (bound > series.remainder_tol * std::max(1.0, c.norm()))
      throw Error(ErrorKind::Accuracy, "series remainder bound " + std::to_string(bound) + " too large at t = " +
                                           std::to_string(t));
    const Eigen::ArrayXd wc = tr.apply(t, g.expand(c)).array();
    return (w * wc * (wc + 2.0 * xc)).sum();
  });
  return base + extra;
}

double first_variation(const FlagSpace& flag, const InvariantMetric& lambda, const LieElement& x,
                       const VariationCurve& q, const QuadratureConfig& quad) {
  (void)flag;
  const AdjointTransport tr(x);
  const Eigen::VectorXd wx = (lambda.weights().array() * x.coeffs().array()).matrix();
  return 2.0 * integrate(rule_for(q, quad), [&](double t) { return tr.apply(t, q.derivative(t)).dot(wx); });
}

double index_bilinear(const FlagSpace& flag, const InvariantMetric& lambda, const LieElement& x,
                      const VariationCurve& q1, const VariationCurve& q2, const QuadratureConfig& quad) {
  require_geodesic(flag, lambda, x);
  if (q1.a() != q2.a()) throw Error(ErrorKind::Usage, "variations live on different intervals");
  const MatrixRealization& g = *x.algebra();
  const AdjointTransport tr(x);
  const Eigen::ArrayXd w = lambda.weights().array();
  const Eigen::VectorXd wx = (w * x.coeffs().array()).matrix();
  return integrate(rule_for(q1, q2, quad), [&](double t) {
    const Eigen::VectorXd v1 = q1.value(t), d1 = q1.derivative(t);
    const Eigen::VectorXd v2 = q2.value(t), d2 = q2.derivative(t);
    const double twist = (bracket_coeffs(g, v1, d2) + bracket_coeffs(g, v2, d1)).dot(wx);
    const Eigen::ArrayXd w1 = tr.apply(t, d1).array();
    const Eigen::ArrayXd w2 = tr.apply(t, d2).array();
    return twist + 2.0 * (w * w1 * w2).sum();
  });
}

double index_form(const FlagSpace& flag, const InvariantMetric& lambda, const LieElement& x,
                  const VariationCurve& q, const QuadratureConfig& quad) {
  require_geodesic(flag, lambda, x);
  const MatrixRealization& g = *x.algebra();
  const AdjointTransport tr(x);
  const Eigen::ArrayXd w = lambda.weights().array();
  const Eigen::VectorXd wx = (w * x.coeffs().array()).matrix();
  return integrate(rule_for(q, quad), [&](double t) {
    const Eigen::VectorXd v = q.value(t), d = q.derivative(t);
    const Eigen::ArrayXd wt = tr.apply(t, d).array();
    return 2.0 * bracket_coeffs(g, v, d).dot(wx) + 2.0 * (w * wt * wt).sum();
  });
}

MNDecomposition mn_decomposition(const FlagSpace& flag, const LieElement& x, const PerturbationPair& pair,
                                 double b, double k, const QuadratureConfig& quad) {
  const VariationCurve q0 = build_q0(flag, pair, b, k);
  MNDecomposition out;
  out.m = index_form(flag, InvariantMetric::normal(flag), x, q0, quad);
  out.n = integrate(rule_for(q0, quad), [&](double t) { return q0.derivative(t).squaredNorm(); });
  return out;
}

PerturbedIndex perturbed_index_report(const FlagSpace& flag, const InvariantMetric& lambda,
                                      const std::set<int>& fixed, const std::vector<double>& xi,
                                      const LieElement& x, const VariationCurve& q, const QuadratureConfig& quad,
                                      double tol) {
  if (!is_subordinated(flag, x, fixed))
    throw Error(ErrorKind::Usage, "X is not subordinated to the fixed components");
  const InvariantMetric sharp = p_perturb(flag, lambda, fixed, xi);
  if (!is_geodesic_vector(flag, lambda, x) || !is_geodesic_vector(flag, sharp, x))
    throw Error(ErrorKind::Usage, "X must be a geodesic vector for both metrics");

  // 4 xi_sigma on the m indices of each perturbed component
  Eigen::ArrayXd shift = Eigen::ArrayXd::Zero(x.coeffs().size());
  for (int i : flag.m_indices()) shift[i] = 4.0 * xi[flag.basis_component()[i]];
  const AdjointTransport tr(x);

  PerturbedIndex out;
  out.base = index_form(flag, lambda, x, q, quad);
  out.correction = integrate(rule_for(q, quad), [&](double t) {
    const Eigen::ArrayXd wt = tr.apply(t, q.derivative(t)).array();
    return (shift * wt * wt).sum();
  });
  out.formula = out.base + out.correction;
  out.direct = index_form(flag, sharp, x, q, quad);
  const double scale = std::max({std::abs(out.direct), std::abs(out.base), 1e-300});
  if (std::abs(out.formula - out.direct) > tol * scale)
    throw Error(ErrorKind::Consistency, "perturbation formula and direct evaluation disagree");
  return out;
}

double perturbed_index(const FlagSpace& flag, const InvariantMetric& lambda, const std::set<int>& fixed,
                       const std::vector<double>& xi, const LieElement& x, const VariationCurve& q,
                       const QuadratureConfig& quad) {
  return perturbed_index_report(flag, lambda, fixed, xi, x, q, quad).formula;
}

}  // namespace flagvar
