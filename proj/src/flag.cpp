#include "flagvar/flag.hpp"

#include <algorithm>
#include <cmath>

#include "flagvar/error.hpp"

namespace flagvar {

FlagSpace::FlagSpace(RealizationPtr algebra, std::vector<int> theta)
    : algebra_(std::move(algebra)), theta_(std::move(theta)) {
  const RootSystem& rs = root_system();
  std::sort(theta_.begin(), theta_.end());
  theta_.erase(std::unique(theta_.begin(), theta_.end()), theta_.end());
  for (int t : theta_)
    if (t < 0 || t >= static_cast<int>(rs.simple().size()))
      throw Error(ErrorKind::Usage, "Theta index " + std::to_string(t + 1) + " is not a simple root");

  // saturate +-Theta under sums that stay in the root system
  std::set<Root> span;
  for (int t : theta_) {
    span.insert(rs.simple()[t]);
    span.insert(-rs.simple()[t]);
  }
  for (bool grew = true; grew;) {
    grew = false;
    std::vector<Root> current(span.begin(), span.end());
    for (const Root& u : current)
      for (const Root& v : current) {
        const Root s = u + v;
        if (!s.is_zero() && rs.contains(s) && span.insert(s).second) grew = true;
      }
  }
  for (const Root& r : rs.roots())
    if (span.count(r)) span_.push_back(r);
  for (const Root& r : rs.positive())
    if (!span.count(r)) complement_.push_back(r);

  // roots are equivalent when their simple coordinates agree off Theta
  std::vector<std::vector<int>> keys;
  for (const Root& r : complement_) {
    std::vector<int> sc = rs.simple_coordinates(r);
    for (int t : theta_) sc[t] = 0;
    auto it = std::find(keys.begin(), keys.end(), sc);
    int idx;
    if (it == keys.end()) {
      idx = static_cast<int>(keys.size());
      keys.push_back(sc);
      components_.push_back({idx, {}});
    } else {
      idx = static_cast<int>(it - keys.begin());
    }
    components_[idx].roots.push_back(r);
    component_of_[r] = idx;
    component_of_[-r] = idx;
  }

  const MatrixRealization& g = *algebra_;
  basis_component_.assign(g.dimension(), -1);
  for (int i = 0; i < g.dimension(); ++i) {
    const CompactBasisElement& e = g.basis_element(i);
    if (e.kind != BasisKind::IH) {
      auto it = component_of_.find(e.root);
      if (it != component_of_.end()) basis_component_[i] = it->second;
    }
    (basis_component_[i] >= 0 ? m_indices_ : k_indices_).push_back(i);
  }
}

std::vector<Root> FlagSpace::theta_roots() const {
  std::vector<Root> out;
  for (int t : theta_) out.push_back(root_system().simple()[t]);
  return out;
}

bool FlagSpace::in_span(const Root& r) const { return std::find(span_.begin(), span_.end(), r) != span_.end(); }

bool FlagSpace::in_complement(const Root& r) const {
  return std::find(complement_.begin(), complement_.end(), r) != complement_.end();
}

int FlagSpace::component_of(const Root& r) const {
  auto it = component_of_.find(r);
  return it == component_of_.end() ? -1 : it->second;
}

FlagPtr build_flag(const RealizationPtr& algebra, const std::vector<int>& theta) {
  return std::make_shared<const FlagSpace>(algebra, theta);
}

FlagPtr build_flag_from_roots(const RealizationPtr& algebra, const std::vector<Root>& theta) {
  std::vector<int> idx;
  for (const Root& r : theta) {
    const int k = algebra->root_system().simple_index(r);
    if (k < 0) throw Error(ErrorKind::Usage, algebra->root_system().label(r) + " is not a simple root");
    idx.push_back(k);
  }
  return build_flag(algebra, idx);
}

const std::vector<IsotropyComponent>& isotropy_components(const FlagSpace& flag) { return flag.components(); }

InvariantMetric::InvariantMetric(const FlagSpace& flag, std::vector<double> lambda) : lambda_(std::move(lambda)) {
  if (static_cast<int>(lambda_.size()) != static_cast<int>(flag.components().size()))
    throw Error(ErrorKind::Usage, "metric needs " + std::to_string(flag.components().size()) +
                                      " weights, got " + std::to_string(lambda_.size()));
  for (double l : lambda_)
    if (!(l > 0.0)) throw Error(ErrorKind::Domain, "metric weights must be positive");
  weights_ = Eigen::VectorXd::Zero(flag.algebra()->dimension());
  for (int i : flag.m_indices()) weights_[i] = 2.0 * lambda_[flag.basis_component()[i]];
}

InvariantMetric InvariantMetric::normal(const FlagSpace& flag, double scale) {
  return InvariantMetric(flag, std::vector<double>(flag.components().size(), scale));
}

InvariantMetric InvariantMetric::scaled(double r) const {
  if (!(r > 0.0)) throw Error(ErrorKind::Domain, "metric scale must be positive");
  InvariantMetric out = *this;
  for (double& l : out.lambda_) l *= r;
  out.weights_ *= r;
  return out;
}

MVector::MVector(FlagPtr flag, LieElement x) : flag_(std::move(flag)), x_(std::move(x)) {
  for (int i : flag_->k_indices())
    if (x_[i] != 0.0) throw Error(ErrorKind::Usage, "vector has a nonzero k component");
}

double MVector::a(const Root& r) const {
  return x_[flag_->algebra()->index_of(BasisKind::A, r)];
}

double MVector::b(const Root& r) const {
  return x_[flag_->algebra()->index_of(BasisKind::S, r)];
}

double metric_product(const InvariantMetric& lambda, const LieElement& u, const LieElement& v) {
  if (!u.compatible(v)) throw Error(ErrorKind::Usage, "elements belong to different algebras");
  return (lambda.weights().array() * u.coeffs().array() * v.coeffs().array()).sum();
}

double metric_product(const InvariantMetric& lambda, const MVector& u, const MVector& v) {
  return metric_product(lambda, u.element(), v.element());
}

InvariantMetric p_perturb(const FlagSpace& flag, const InvariantMetric& lambda, const std::set<int>& fixed,
                          const std::vector<double>& xi) {
  const int count = static_cast<int>(flag.components().size());
  if (static_cast<int>(xi.size()) != count) throw Error(ErrorKind::Usage, "xi needs one entry per component");
  std::vector<double> out = lambda.lambda();
  for (int s = 0; s < count; ++s) {
    if (fixed.count(s)) {
      if (xi[s] != 0.0)
        throw Error(ErrorKind::Usage, "xi must vanish on the fixed component " + std::to_string(s + 1));
      continue;
    }
    out[s] += xi[s];
    if (!(out[s] > 0.0))
      throw Error(ErrorKind::Domain, "perturbed weight of component " + std::to_string(s + 1) + " is not positive");
  }
  return InvariantMetric(flag, out);
}

LieElement project_m(const FlagSpace& flag, const LieElement& x) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(x.coeffs().size());
  for (int i : flag.m_indices()) c[i] = x[i];
  return LieElement(x.algebra(), c);
}

LieElement project_k(const FlagSpace& flag, const LieElement& x) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(x.coeffs().size());
  for (int i : flag.k_indices()) c[i] = x[i];
  return LieElement(x.algebra(), c);
}

bool is_subordinated(const FlagSpace& flag, const LieElement& x, const std::set<int>& components, double tol) {
  for (int i : flag.m_indices())
    if (std::abs(x[i]) > tol && !components.count(flag.basis_component()[i])) return false;
  return true;
}

nlohmann::json to_json(const FlagSpace& flag) {
  nlohmann::json doc;
  const RootSystem& rs = flag.root_system();
  doc["family"] = to_string(rs.family());
  doc["rank"] = rs.rank();
  std::vector<int> theta;
  for (int t : flag.theta()) theta.push_back(t + 1);
  doc["theta"] = theta;
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : flag.components()) {
    std::vector<std::string> labels;
    for (const Root& r : c.roots) labels.push_back(rs.label(r));
    comps.push_back({{"index", c.index + 1}, {"roots", labels}, {"dimension", c.dimension()}});
  }
  doc["components"] = comps;
  return doc;
}

nlohmann::json to_json(const FlagSpace& flag, const InvariantMetric& lambda) {
  nlohmann::json doc = to_json(flag);
  doc["lambda"] = lambda.lambda();
  return doc;
}

FlagPtr flag_from_json(const nlohmann::json& doc) {
  try {
    const Family f = parse_family(doc.at("family").get<std::string>());
    const int rank = doc.at("rank").get<int>();
    std::vector<int> theta;
    for (int t : doc.at("theta").get<std::vector<int>>()) theta.push_back(t - 1);
    return build_flag(build_realization(build_root_system(f, rank)), theta);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Usage, std::string("malformed flag document: ") + e.what());
  }
}

InvariantMetric metric_from_json(const FlagSpace& flag, const nlohmann::json& doc) {
  try {
    return InvariantMetric(flag, doc.at("lambda").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Usage, std::string("malformed metric document: ") + e.what());
  }
}

}  // namespace flagvar
