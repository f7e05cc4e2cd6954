#pragma once

#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "flagvar/variation.hpp"

namespace flagvar {

struct PerturbationPair {
  Root alpha;
  int sigma0;   // component of alpha
  Root beta;    // earlier of the two in the positive-root listing
  Root delta;
  double rate;  // m_{-alpha, beta}
};

enum class PairMode {
  Symmetric,  // neither beta - delta nor delta - beta lies in the complement
  Literal,    // only beta - delta is tested
};

bool is_perturbation_pair(const FlagSpace& flag, const Root& alpha, const Root& beta, const Root& delta,
                          PairMode mode = PairMode::Symmetric);

/// Throws a usage error if alpha is not in the complement.
std::vector<PerturbationPair> find_perturbation_pairs(const FlagSpace& flag, const Root& alpha,
                                                      PairMode mode = PairMode::Symmetric);

/// k sin(2 pi t / b) A_beta + (1/k) t (t - b) A_delta, with beta and delta
/// swapped when the rate is negative.
VariationCurve build_q0(const FlagSpace& flag, const PerturbationPair& pair, double b, double k);

struct Interval {
  double lo;
  double hi;
  bool empty() const { return !(lo < hi); }
  bool contains(double v) const { return lo < v && v < hi; }
  double midpoint() const { return 0.5 * (lo + hi); }
};

/// (-1, -M/(4N)); throws an infeasibility error when M >= 4N.
Interval xi_interval(double m, double n);

/// (b^4 + 6 pi^2 k^4) / (3 k^2 b).
double n_closed_form(double b, double k);

struct OptimalK {
  double k_star;
  double max_ratio;
  double numeric_k;
  double numeric_ratio;
};

/// Maximizer of (4N - M)/(4N) over k for M - 4N = -8 m b^2 / pi.
OptimalK optimal_k(double b, double m, const QuadratureConfig& quad = {});

struct ConjugateWitness {
  FlagPtr flag;
  Root alpha;
  PerturbationPair pair;
  double b;
  double k;
  double xi;
  double m;
  double n;
  Interval xi_range;
  PerturbedIndex index;
  InvariantMetric sharp;

  double value() const { return index.formula; }
  double closed_form() const { return m + 4.0 * xi * n; }
};

/// Builds the witness without judging the sign of the index. xi defaults to
/// the midpoint of xi_interval.
ConjugateWitness assemble_witness(const FlagPtr& flag, const PerturbationPair& pair, double b, double k,
                                  std::optional<double> xi = std::nullopt, const QuadratureConfig& quad = {});

/// As assemble_witness, but throws a witness error unless the index is negative.
ConjugateWitness conjugate_witness(const FlagPtr& flag, const PerturbationPair& pair, double b, double k,
                                   std::optional<double> xi = std::nullopt, const QuadratureConfig& quad = {});

nlohmann::json to_json(const ConjugateWitness& w);

struct GramProblem {
  int mesh;
  double b;
  std::vector<int> subset;
  Eigen::MatrixXd matrix;   // index form on the coefficient space
  Eigen::MatrixXd reduced;  // same form against the int <q1', q2'> inner product
  double norm;              // largest |eigenvalue| of `reduced`
  double min_eigenvalue;         // SelfAdjointEigenSolver on `reduced`
  double min_eigenvalue_jacobi;  // cyclic Jacobi on `reduced`

  bool has_negative_direction(double rel_tol = 1e-6) const { return min_eigenvalue < -rel_tol * norm; }
};

/// Index form on {hat functions vanishing at 0 and b} x {basis subset}; an
/// empty subset means the whole algebra.
GramProblem index_gram(const FlagSpace& flag, const InvariantMetric& lambda, const LieElement& x, double b,
                       int mesh, std::vector<int> subset = {}, int nodes_per_element = 8);

struct ConjugateEstimate {
  double estimate;
  double lo;
  double hi;
  int evaluations;
};

/// Bisects on b until (hi - lo) / hi < width; throws a bracket error when
/// the endpoints do not straddle the onset of a negative direction.
ConjugateEstimate first_conjugate_estimate(const FlagSpace& flag, const InvariantMetric& lambda,
                                           const LieElement& x, double lo, double hi, int mesh,
                                           std::vector<int> subset = {}, double rel_tol = 1e-6,
                                           double width = 1e-3);

}  // namespace flagvar
