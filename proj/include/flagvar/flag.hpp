#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "flagvar/algebra.hpp"
#include "flagvar/roots.hpp"

namespace flagvar {

struct IsotropyComponent {
  int index;                // 0-based position in FlagSpace::components()
  std::vector<Root> roots;  // positive roots, in listing order
  int dimension() const { return 2 * static_cast<int>(roots.size()); }
};

/// U/K_Theta for a subset Theta of the simple roots.
class FlagSpace {
 public:
  /// theta holds 0-based positions in root_system().simple().
  FlagSpace(RealizationPtr algebra, std::vector<int> theta);

  const RealizationPtr& algebra() const { return algebra_; }
  const RootSystem& root_system() const { return algebra_->root_system(); }
  const std::vector<int>& theta() const { return theta_; }
  std::vector<Root> theta_roots() const;

  /// All roots (both signs) spanned by Theta.
  const std::vector<Root>& span() const { return span_; }
  bool in_span(const Root& r) const;
  /// Positive roots outside the span, in listing order.
  const std::vector<Root>& complement() const { return complement_; }
  bool in_complement(const Root& r) const;

  const std::vector<IsotropyComponent>& components() const { return components_; }
  /// Component index of a root in the complement (either sign); -1 otherwise.
  int component_of(const Root& r) const;
  /// Component index per basis index; -1 for the k part.
  const std::vector<int>& basis_component() const { return basis_component_; }

  const std::vector<int>& m_indices() const { return m_indices_; }
  const std::vector<int>& k_indices() const { return k_indices_; }
  int m_dimension() const { return static_cast<int>(m_indices_.size()); }

 private:
  RealizationPtr algebra_;
  std::vector<int> theta_;
  std::vector<Root> span_;
  std::vector<Root> complement_;
  std::vector<IsotropyComponent> components_;
  std::map<Root, int> component_of_;
  std::vector<int> basis_component_;
  std::vector<int> m_indices_;
  std::vector<int> k_indices_;
};

using FlagPtr = std::shared_ptr<const FlagSpace>;

/// Throws a usage error if an index is not a simple root position.
FlagPtr build_flag(const RealizationPtr& algebra, const std::vector<int>& theta);
/// Same, with Theta given as roots; each must be simple.
FlagPtr build_flag_from_roots(const RealizationPtr& algebra, const std::vector<Root>& theta);

const std::vector<IsotropyComponent>& isotropy_components(const FlagSpace& flag);

/// Positive weight per isotropy component.
class InvariantMetric {
 public:
  InvariantMetric() = default;
  /// Throws a domain error on a nonpositive weight, usage error on a size mismatch.
  InvariantMetric(const FlagSpace& flag, std::vector<double> lambda);
  static InvariantMetric normal(const FlagSpace& flag, double scale = 1.0);

  const std::vector<double>& lambda() const { return lambda_; }
  double operator[](int component) const { return lambda_.at(component); }
  int size() const { return static_cast<int>(lambda_.size()); }
  InvariantMetric scaled(double r) const;

  /// w_i with B(U, V) = sum_i w_i u_i v_i over the compact basis (zero on k).
  const Eigen::VectorXd& weights() const { return weights_; }

 private:
  std::vector<double> lambda_;
  Eigen::VectorXd weights_;
};

/// Tangent vector at the origin: a LieElement with vanishing k part.
class MVector {
 public:
  MVector(FlagPtr flag, LieElement x);

  const FlagPtr& flag() const { return flag_; }
  const LieElement& element() const { return x_; }
  double a(const Root& r) const;
  double b(const Root& r) const;

 private:
  FlagPtr flag_;
  LieElement x_;
};

/// B_Lambda(U, V) on the m parts of U and V.
double metric_product(const InvariantMetric& lambda, const LieElement& u, const LieElement& v);
double metric_product(const InvariantMetric& lambda, const MVector& u, const MVector& v);

/// Lambda# = Lambda + xi off the components in `fixed`. xi is indexed by component.
InvariantMetric p_perturb(const FlagSpace& flag, const InvariantMetric& lambda, const std::set<int>& fixed,
                          const std::vector<double>& xi);

LieElement project_m(const FlagSpace& flag, const LieElement& x);
LieElement project_k(const FlagSpace& flag, const LieElement& x);

bool is_subordinated(const FlagSpace& flag, const LieElement& x, const std::set<int>& components,
                     double tol = 1e-12);

nlohmann::json to_json(const FlagSpace& flag);
nlohmann::json to_json(const FlagSpace& flag, const InvariantMetric& lambda);
FlagPtr flag_from_json(const nlohmann::json& doc);
InvariantMetric metric_from_json(const FlagSpace& flag, const nlohmann::json& doc);

}  // namespace flagvar
