#pragma once

#include <complex>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "flagvar/roots.hpp"

namespace flagvar {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

/// Sparse matrix as a triplet list; every generator in this library has at most
/// four nonzero entries.
struct SparseMatrix {
  struct Entry {
    int row;
    int col;
    Complex value;
  };
  std::vector<Entry> entries;

  CMatrix dense(int size) const;
  SparseMatrix scaled(Complex factor) const;
  SparseMatrix plus(const SparseMatrix& other, Complex factor = 1.0) const;
};

enum class BasisKind { A, S, IH };

/// One element of the compact basis {A_a, S_a : a > 0} u {iH_b : b simple}.
struct CompactBasisElement {
  BasisKind kind;
  Root root;  // positive root for A/S, simple root for IH
  SparseMatrix matrix;
};

/// Defining-representation matrices of sl(N, C) (family A) or sp(2l, C)
/// (family C), normalized so that (X_a, X_-a) = 1 under the Killing form, and
/// the compact real form spanned by A_a = X_a - X_-a, S_a = i(X_a + X_-a), iH_b.
///
/// Immutable after construction; share it through RealizationPtr.
class MatrixRealization {
 public:
  explicit MatrixRealization(RootSystem roots);

  const RootSystem& root_system() const { return roots_; }
  int matrix_size() const { return size_; }
  /// Killing form of the complex algebra is killing_scale() * tr(XY).
  double killing_scale() const { return scale_; }

  const SparseMatrix& generator(const Root& r) const;
  /// H_a = [X_a, X_-a], the Killing dual of a.
  CMatrix cartan(const Root& r) const;
  /// a(H) for a diagonal Cartan matrix H.
  Complex evaluate(const Root& r, const CMatrix& h) const;

  Complex killing(const CMatrix& x, const CMatrix& y) const;

  int dimension() const { return static_cast<int>(basis_.size()); }
  const std::vector<CompactBasisElement>& basis() const { return basis_; }
  const CompactBasisElement& basis_element(int index) const { return basis_.at(index); }
  /// Index of A_a / S_a (a positive) or iH_b (b simple) in basis(); throws usage error.
  int index_of(BasisKind kind, const Root& r) const;
  std::string basis_label(int index) const;
  /// Parses "A12", "S12+", "IH23" style labels into a basis index.
  int parse_basis_label(const std::string& label) const;

  /// Killing Gram matrix of the compact basis (real, negative definite).
  const Eigen::MatrixXd& gram() const { return gram_; }

  CMatrix to_matrix(const Eigen::VectorXd& coeffs) const;
  /// Re-expands a matrix of the compact form in the compact basis. Throws a
  /// consistency error if the reconstruction residual exceeds tol * max(1, |m|).
  Eigen::VectorXd expand(const CMatrix& m, double tol = 1e-10) const;

  /// [x, B_j] for a dense x and the j-th basis element, using sparsity.
  CMatrix commutator_with_basis(const CMatrix& x, int j) const;

  /// m_{a,b} from [X_a, X_b] = m_{a,b} X_{a+b}; zero when a + b is not a root.
  double structure_constant(const Root& a, const Root& b) const;

 private:
  RootSystem roots_;
  int size_;
  double scale_;
  std::map<Root, SparseMatrix> generators_;
  std::vector<CompactBasisElement> basis_;
  Eigen::MatrixXd gram_;
  int first_cartan_;
  Eigen::LDLT<Eigen::MatrixXd> cartan_gram_;
};

using RealizationPtr = std::shared_ptr<const MatrixRealization>;

RealizationPtr build_realization(const RootSystem& roots);

/// Element of the compact real form, stored as real coefficients over the
/// compact basis of its realization.
class LieElement {
 public:
  LieElement() = default;
  LieElement(RealizationPtr algebra, Eigen::VectorXd coeffs);

  static LieElement zero(RealizationPtr algebra);
  static LieElement basis(RealizationPtr algebra, int index);
  static LieElement basis(RealizationPtr algebra, BasisKind kind, const Root& r);
  static LieElement from_matrix(RealizationPtr algebra, const CMatrix& m);

  const RealizationPtr& algebra() const { return algebra_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  double operator[](int i) const { return coeffs_[i]; }
  CMatrix matrix() const;

  LieElement operator+(const LieElement& other) const;
  LieElement operator-(const LieElement& other) const;
  LieElement operator*(double s) const;
  friend LieElement operator*(double s, const LieElement& x) { return x * s; }

  bool compatible(const LieElement& other) const;

 private:
  RealizationPtr algebra_;
  Eigen::VectorXd coeffs_;
};

double killing_form(const LieElement& u, const LieElement& v);
LieElement bracket(const LieElement& u, const LieElement& v);
double structure_constant(const MatrixRealization& algebra, const Root& a, const Root& b);
/// Real matrix of ad X over the compact basis: column j holds [X, B_j].
Eigen::MatrixXd ad_matrix(const LieElement& x);

}  // namespace flagvar
