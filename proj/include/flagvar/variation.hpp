#pragma once

#include <set>
#include <vector>

#include "flagvar/flag.hpp"
#include "flagvar/numerics.hpp"

namespace flagvar {

/// Scalar coefficient function with an analytic derivative.
class ScalarProfile {
 public:
  enum class Kind { Polynomial, PolySin, PolyCos, Hat };

  static ScalarProfile constant(double c);
  /// c[0] + c[1] t + c[2] t^2 + ...
  static ScalarProfile polynomial(std::vector<double> coeffs);
  static ScalarProfile poly_sin(std::vector<double> coeffs, double omega);
  static ScalarProfile poly_cos(std::vector<double> coeffs, double omega);
  /// Piecewise linear: 0 outside [left, right], 1 at peak.
  static ScalarProfile hat(double left, double peak, double right);

  Kind kind() const { return kind_; }
  double value(double t) const;
  double derivative(double t) const;
  std::vector<double> breakpoints() const;
  ScalarProfile scaled(double s) const;

 private:
  Kind kind_ = Kind::Polynomial;
  std::vector<double> coeffs_;
  double omega_ = 0.0;
  double left_ = 0.0, peak_ = 0.0, right_ = 0.0, height_ = 1.0;
};

struct CurveTerm {
  int basis_index;
  ScalarProfile profile;
};

/// q(t) = sum_j c_j(t) B_j on [0, a].
class VariationCurve {
 public:
  VariationCurve(RealizationPtr algebra, double a, std::vector<CurveTerm> terms = {});

  static VariationCurve zero(RealizationPtr algebra, double a);
  /// q(t) = Z for all t.
  static VariationCurve constant(const LieElement& z, double a);
  /// q(t) = t W.
  static VariationCurve linear(const LieElement& w, double a);

  const RealizationPtr& algebra() const { return algebra_; }
  double a() const { return a_; }
  const std::vector<CurveTerm>& terms() const { return terms_; }

  Eigen::VectorXd value(double t) const;
  Eigen::VectorXd derivative(double t) const;
  LieElement value_element(double t) const { return LieElement(algebra_, value(t)); }
  LieElement derivative_element(double t) const { return LieElement(algebra_, derivative(t)); }
  std::vector<double> breakpoints() const;

  /// Largest gap between the supplied derivative and a centered difference
  /// over `samples` interior points.
  double derivative_check(int samples = 17, double h = 1e-5) const;

  VariationCurve operator+(const VariationCurve& other) const;
  VariationCurve operator*(double s) const;

 private:
  RealizationPtr algebra_;
  double a_;
  std::vector<CurveTerm> terms_;
};

/// exp(t ad X) on the compact basis.
class AdjointTransport {
 public:
  explicit AdjointTransport(const LieElement& x);

  const LieElement& x() const { return x_; }
  /// exp(tX) in the defining representation (unitary).
  CMatrix group_element(double t) const;
  /// exp(t ad X) applied to a coefficient vector by conjugation with exp(tX).
  Eigen::VectorXd apply(double t, const Eigen::VectorXd& v) const;
  /// exp(t ad X) as a real matrix, by Pade scaling and squaring.
  Eigen::MatrixXd ad_exponential(double t) const;

 private:
  LieElement x_;
  Eigen::MatrixXd ad_;
  CMatrix vectors_;
  Eigen::VectorXd phases_;
};

/// exp(t ad X)(A), computed on the adjoint side and cross-checked against
/// conjugation in the defining representation; throws a consistency error
/// when the two disagree by more than tol.
LieElement transport(const LieElement& x, double t, const LieElement& a, double tol = 1e-10);

/// q(0) and exp(a ad X) q(a) lie in k.
bool is_proper(const FlagSpace& flag, const LieElement& x, const VariationCurve& q, double tol = 1e-10);

struct SeriesConfig {
  int terms = 30;
  double remainder_tol = 1e-10;
};

double variation_energy(const FlagSpace& flag, const InvariantMetric& lambda, const LieElement& x,
                        const VariationCurve& q, double s, const QuadratureConfig& quad = {},
                        const SeriesConfig& series = {});

double first_variation(const FlagSpace& flag, const InvariantMetric& lambda, const LieElement& x,
                       const VariationCurve& q, const QuadratureConfig& quad = {});

/// Second variation; throws a precondition error if X is not a geodesic vector.
double index_form(const FlagSpace& flag, const InvariantMetric& lambda, const LieElement& x,
                  const VariationCurve& q, const QuadratureConfig& quad = {});

double index_bilinear(const FlagSpace& flag, const InvariantMetric& lambda, const LieElement& x,
                      const VariationCurve& q1, const VariationCurve& q2, const QuadratureConfig& quad = {});

struct PerturbationPair;

struct MNDecomposition {
  double m;  // index form of q0 under the normal metric
  double n;  // integral of |q0'|^2 in frame coefficients
};

MNDecomposition mn_decomposition(const FlagSpace& flag, const LieElement& x, const PerturbationPair& pair,
                                 double b, double k, const QuadratureConfig& quad = {});

struct PerturbedIndex {
  double base;        // index form under Lambda
  double correction;  // 4 sum xi_sigma int (f^2 + g^2)
  double formula;     // base + correction
  double direct;      // index form under Lambda#
};

/// Both evaluations; throws a consistency error if they differ by more than
/// tol (relative), a usage error on violated hypotheses.
PerturbedIndex perturbed_index_report(const FlagSpace& flag, const InvariantMetric& lambda,
                                      const std::set<int>& fixed, const std::vector<double>& xi,
                                      const LieElement& x, const VariationCurve& q,
                                      const QuadratureConfig& quad = {}, double tol = 1e-8);

double perturbed_index(const FlagSpace& flag, const InvariantMetric& lambda, const std::set<int>& fixed,
                       const std::vector<double>& xi, const LieElement& x, const VariationCurve& q,
                       const QuadratureConfig& quad = {});

}  // namespace flagvar
