#include "flagvar/algebra.hpp"

#include <algorithm>
#include <cmath>

#include "flagvar/error.hpp"

namespace flagvar {

CMatrix SparseMatrix::dense(int size) const {
  CMatrix m = CMatrix::Zero(size, size);
  for (const Entry& e : entries) m(e.row, e.col) += e.value;
  return m;
}

SparseMatrix SparseMatrix::scaled(Complex factor) const {
  SparseMatrix out = *this;
  for (Entry& e : out.entries) e.value *= factor;
  return out;
}

SparseMatrix SparseMatrix::plus(const SparseMatrix& other, Complex factor) const {
  SparseMatrix out = *this;
  for (const Entry& e : other.entries) {
    auto it = std::find_if(out.entries.begin(), out.entries.end(),
                           [&](const Entry& f) { return f.row == e.row && f.col == e.col; });
    if (it == out.entries.end())
      out.entries.push_back({e.row, e.col, factor * e.value});
    else
      it->value += factor * e.value;
  }
  std::erase_if(out.entries, [](const Entry& e) { return std::abs(e.value) == 0.0; });
  return out;
}

namespace {

SparseMatrix sparsify(const CMatrix& m) {
  SparseMatrix out;
  for (int c = 0; c < m.cols(); ++c)
    for (int r = 0; r < m.rows(); ++r)
      if (std::abs(m(r, c)) > 0.0) out.entries.push_back({r, c, m(r, c)});
  return out;
}

// Positions of the +1/-1/+2 entries of a root in epsilon coordinates.
struct RootShape {
  int plus_first = -1;   // first index with coefficient +1 (or +2)
  int plus_second = -1;  // second +1
  int minus_first = -1;  // first -1 (or -2)
  int minus_second = -1;
  bool doubled = false;
};

RootShape shape_of(const Root& r) {
  RootShape s;
  for (int k = 0; k < static_cast<int>(r.coords.size()); ++k) {
    const int c = r.coords[k];
    if (c == 2 || c == -2) {
      s.doubled = true;
      (c > 0 ? s.plus_first : s.minus_first) = k;
    } else if (c == 1) {
      (s.plus_first < 0 ? s.plus_first : s.plus_second) = k;
    } else if (c == -1) {
      (s.minus_first < 0 ? s.minus_first : s.minus_second) = k;
    }
  }
  return s;
}

SparseMatrix generator_type_a(const Root& r, int n) {
  const RootShape s = shape_of(r);
  const double c = 1.0 / std::sqrt(2.0 * n);
  return SparseMatrix{{{s.plus_first, s.minus_first, c}}};
}

SparseMatrix generator_type_c(const Root& r, int rank) {
  const RootShape s = shape_of(r);
  const double m = 1.0 / std::sqrt(2.0 * rank + 2.0);
  const double h = m / std::sqrt(2.0);
  const int l = rank;
  SparseMatrix out;
  if (s.doubled) {
    if (s.plus_first >= 0)
      out.entries.push_back({s.plus_first, l + s.plus_first, m});
    else
      out.entries.push_back({l + s.minus_first, s.minus_first, m});
  } else if (s.plus_first >= 0 && s.minus_first >= 0) {
    // e_i - e_j  ->  h (E_ij - E_{l+j, l+i})
    const int i = s.plus_first, j = s.minus_first;
    out.entries.push_back({i, j, h});
    out.entries.push_back({l + j, l + i, -h});
  } else if (s.plus_second >= 0) {
    // e_i + e_j  ->  h (E_{i, l+j} + E_{j, l+i})
    const int i = s.plus_first, j = s.plus_second;
    out.entries.push_back({i, l + j, h});
    out.entries.push_back({j, l + i, h});
  } else {
    // -(e_i + e_j)  ->  h (E_{l+i, j} + E_{l+j, i})
    const int i = s.minus_first, j = s.minus_second;
    out.entries.push_back({l + i, j, h});
    out.entries.push_back({l + j, i, h});
  }
  return out;
}

}  // namespace

MatrixRealization::MatrixRealization(RootSystem roots) : roots_(std::move(roots)) {
  const int l = roots_.rank();
  if (roots_.family() == Family::A) {
    size_ = l + 1;
    scale_ = 2.0 * size_;
  } else {
    size_ = 2 * l;
    scale_ = 2.0 * l + 2.0;
  }
  for (const Root& r : roots_.roots()) {
    generators_[r] = roots_.family() == Family::A ? generator_type_a(r, size_)
                                                   : generator_type_c(r, l);
  }
  const Complex i_unit(0.0, 1.0);
  for (const Root& r : roots_.positive()) {
    const SparseMatrix& xp = generators_.at(r);
    const SparseMatrix& xm = generators_.at(-r);
    basis_.push_back({BasisKind::A, r, xp.plus(xm, -1.0)});
    basis_.push_back({BasisKind::S, r, xp.scaled(i_unit).plus(xm, i_unit)});
  }
  first_cartan_ = static_cast<int>(basis_.size());
  for (const Root& b : roots_.simple()) basis_.push_back({BasisKind::IH, b, sparsify(i_unit * cartan(b))});

  const int dim = dimension();
  std::vector<CMatrix> dense;
  dense.reserve(dim);
  for (const auto& e : basis_) dense.push_back(e.matrix.dense(size_));
  gram_.resize(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) gram_(i, j) = killing(dense[i], dense[j]).real();
  cartan_gram_.compute(gram_.bottomRightCorner(dim - first_cartan_, dim - first_cartan_));
}

const SparseMatrix& MatrixRealization::generator(const Root& r) const {
  auto it = generators_.find(r);
  if (it == generators_.end()) throw Error(ErrorKind::Usage, "not a root: " + roots_.label(r));
  return it->second;
}

CMatrix MatrixRealization::cartan(const Root& r) const {
  const CMatrix xp = generator(r).dense(size_);
  const CMatrix xm = generator(-r).dense(size_);
  return xp * xm - xm * xp;
}

Complex MatrixRealization::evaluate(const Root& r, const CMatrix& h) const {
  Complex v = 0.0;
  for (int k = 0; k < roots_.ambient_dimension(); ++k) v += static_cast<double>(r.coords[k]) * h(k, k);
  return v;
}

Complex MatrixRealization::killing(const CMatrix& x, const CMatrix& y) const {
  // tr(XY) without forming the product
  return scale_ * (x.transpose().cwiseProduct(y)).sum();
}

int MatrixRealization::index_of(BasisKind kind, const Root& r) const {
  for (int i = 0; i < dimension(); ++i)
    if (basis_[i].kind == kind && basis_[i].root == r) return i;
  throw Error(ErrorKind::Usage, "no basis element for root " + roots_.label(r));
}

std::string MatrixRealization::basis_label(int index) const {
  const CompactBasisElement& e = basis_.at(index);
  const std::string root = roots_.label(e.root).substr(1);
  switch (e.kind) {
    case BasisKind::A: return "A" + root;
    case BasisKind::S: return "S" + root;
    case BasisKind::IH: return "IH" + root;
  }
  return {};
}

int MatrixRealization::parse_basis_label(const std::string& label) const {
  BasisKind kind;
  std::string rest;
  if (label.size() > 2 && (label.rfind("IH", 0) == 0 || label.rfind("iH", 0) == 0)) {
    kind = BasisKind::IH;
    rest = label.substr(2);
  } else if (!label.empty() && (label[0] == 'A' || label[0] == 'S')) {
    kind = label[0] == 'A' ? BasisKind::A : BasisKind::S;
    rest = label.substr(1);
  } else {
    throw Error(ErrorKind::Usage, "malformed basis label '" + label + "'");
  }
  return index_of(kind, roots_.parse("a" + rest));
}

CMatrix MatrixRealization::to_matrix(const Eigen::VectorXd& coeffs) const {
  CMatrix m = CMatrix::Zero(size_, size_);
  for (int i = 0; i < dimension(); ++i) {
    if (coeffs[i] == 0.0) continue;
    for (const auto& e : basis_[i].matrix.entries) m(e.row, e.col) += coeffs[i] * e.value;
  }
  return m;
}

Eigen::VectorXd MatrixRealization::expand(const CMatrix& m, double tol) const {
  const int dim = dimension();
  Eigen::VectorXd out(dim);
  auto pairing = [&](int i) {
    Complex s = 0.0;
    for (const auto& e : basis_[i].matrix.entries) s += m(e.col, e.row) * e.value;
    return scale_ * s.real();
  };
  for (int i = 0; i < first_cartan_; ++i) out[i] = pairing(i) / gram_(i, i);
  Eigen::VectorXd rhs(dim - first_cartan_);
  for (int i = first_cartan_; i < dim; ++i) rhs[i - first_cartan_] = pairing(i);
  out.tail(dim - first_cartan_) = cartan_gram_.solve(rhs);

  if (tol > 0.0) {
    const double residual = (m - to_matrix(out)).cwiseAbs().maxCoeff();
    const double ref = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (residual > tol * ref)
      throw Error(ErrorKind::Consistency,
                  "matrix is not in the compact real form (re-expansion residual " +
                      std::to_string(residual) + ")");
  }
  return out;
}

CMatrix MatrixRealization::commutator_with_basis(const CMatrix& x, int j) const {
  CMatrix out = CMatrix::Zero(size_, size_);
  for (const auto& e : basis_.at(j).matrix.entries) {
    out.col(e.col) += e.value * x.col(e.row);
    out.row(e.row) -= e.value * x.row(e.col);
  }
  return out;
}

double MatrixRealization::structure_constant(const Root& a, const Root& b) const {
  const Root s = a + b;
  if (s.is_zero() || !roots_.contains(s)) return 0.0;
  const CMatrix xa = generator(a).dense(size_);
  const CMatrix xb = generator(b).dense(size_);
  return killing(xa * xb - xb * xa, generator(-s).dense(size_)).real();
}

RealizationPtr build_realization(const RootSystem& roots) {
  return std::make_shared<const MatrixRealization>(roots);
}

LieElement::LieElement(RealizationPtr algebra, Eigen::VectorXd coeffs)
    : algebra_(std::move(algebra)), coeffs_(std::move(coeffs)) {
  if (!algebra_) throw Error(ErrorKind::Usage, "LieElement without an algebra");
  if (coeffs_.size() != algebra_->dimension())
    throw Error(ErrorKind::Usage, "coefficient vector has the wrong dimension");
}

LieElement LieElement::zero(RealizationPtr algebra) {
  const int dim = algebra->dimension();
  return LieElement(std::move(algebra), Eigen::VectorXd::Zero(dim));
}

LieElement LieElement::basis(RealizationPtr algebra, int index) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(algebra->dimension());
  c[index] = 1.0;
  return LieElement(std::move(algebra), std::move(c));
}

LieElement LieElement::basis(RealizationPtr algebra, BasisKind kind, const Root& r) {
  const int index = algebra->index_of(kind, r);
  return basis(std::move(algebra), index);
}

LieElement LieElement::from_matrix(RealizationPtr algebra, const CMatrix& m) {
  Eigen::VectorXd c = algebra->expand(m);
  return LieElement(std::move(algebra), std::move(c));
}

CMatrix LieElement::matrix() const { return algebra_->to_matrix(coeffs_); }

bool LieElement::compatible(const LieElement& other) const {
  if (!algebra_ || !other.algebra_) return false;
  if (algebra_ == other.algebra_) return true;
  return algebra_->root_system().family() == other.algebra_->root_system().family() &&
         algebra_->root_system().rank() == other.algebra_->root_system().rank();
}

namespace {
void require_compatible(const LieElement& u, const LieElement& v) {
  if (!u.compatible(v)) throw Error(ErrorKind::Usage, "elements belong to different algebras");
}
}  // namespace

LieElement LieElement::operator+(const LieElement& other) const {
  require_compatible(*this, other);
  return LieElement(algebra_, coeffs_ + other.coeffs_);
}

LieElement LieElement::operator-(const LieElement& other) const {
  require_compatible(*this, other);
  return LieElement(algebra_, coeffs_ - other.coeffs_);
}

LieElement LieElement::operator*(double s) const { return LieElement(algebra_, coeffs_ * s); }

double killing_form(const LieElement& u, const LieElement& v) {
  require_compatible(u, v);
  return u.coeffs().dot(u.algebra()->gram() * v.coeffs());
}

LieElement bracket(const LieElement& u, const LieElement& v) {
  require_compatible(u, v);
  const CMatrix a = u.matrix();
  const CMatrix b = v.matrix();
  return LieElement::from_matrix(u.algebra(), a * b - b * a);
}

double structure_constant(const MatrixRealization& algebra, const Root& a, const Root& b) {
  return algebra.structure_constant(a, b);
}

Eigen::MatrixXd ad_matrix(const LieElement& x) {
  const MatrixRealization& alg = *x.algebra();
  const int dim = alg.dimension();
  const CMatrix xm = x.matrix();
  Eigen::MatrixXd ad(dim, dim);
  for (int j = 0; j < dim; ++j) ad.col(j) = alg.expand(alg.commutator_with_basis(xm, j));
  return ad;
}

}  // namespace flagvar
