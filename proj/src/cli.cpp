#include "flagvar/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "flagvar/conjugacy.hpp"
#include "flagvar/error.hpp"
#include "flagvar/geodesy.hpp"
#include "flagvar/spaces.hpp"

namespace flagvar::cli {

namespace {

const double pi = std::acos(-1.0);

const std::set<std::string> kCommands{"describe", "check-vector", "index-form", "pairs", "witness",
                                      "conjtime", "ricci-flow", "phase-portrait", "reproduce"};
const std::set<std::string> kReproduce{"thm4.4", "lemma4.7", "thm4.10", "example5.4", "conjtime-cp3",
                                       "conjtime-su3"};
const std::set<std::string> kKeys{"command", "name",   "space",   "n",       "family", "rank",     "theta",
                                  "lambda",  "vector", "alpha",   "b",       "k",      "xi",       "mesh",
                                  "lo",      "hi",     "t-end",   "x",       "y",      "rel-tol",  "abs-tol",
                                  "max-step", "grid",  "traj",    "format",  "output", "svg"};

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

double to_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v))
    throw Error(ErrorKind::Usage, "malformed number for " + key + ": '" + text + "'");
  return v;
}

int to_int(const std::string& key, const std::string& text) {
  const double v = to_double(key, text);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw Error(ErrorKind::Usage, key + " must be an integer");
  return static_cast<int>(v);
}

std::string join_numbers(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_number(v[i]);
  return out;
}

bool is_usage_kind(ErrorKind k) {
  switch (k) {
    case ErrorKind::Usage:
    case ErrorKind::Configuration:
    case ErrorKind::Parameter:
    case ErrorKind::Domain:
    case ErrorKind::Precondition:
    case ErrorKind::Bracket:
      return true;
    default:
      return false;
  }
}

class Report {
 public:
  Report(const RunConfig& config) {
    doc_["command"] = config.command == "reproduce" ? "reproduce " + config.name : config.command;
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [key, value] : parse_key_values(emit(config)))
      if (key != "command" && key != "name") params[key] = value;
    doc_["params"] = params;
    doc_["results"] = nlohmann::json::object();
    doc_["assertions"] = nlohmann::json::array();
  }

  nlohmann::json& results() { return doc_["results"]; }

  bool check(const std::string& name, bool pass, double value, double tolerance) {
    doc_["assertions"].push_back({{"name", name}, {"pass", pass}, {"value", value}, {"tolerance", tolerance}});
    if (!pass) failures_.push_back(name + " (value " + format_number(value) + ")");
    return pass;
  }

  bool near(const std::string& name, double value, double expected, double tolerance, bool relative) {
    const double err = relative ? std::abs(value - expected) / std::max(std::abs(expected), 1e-300)
                                : std::abs(value - expected);
    doc_["assertions"].push_back({{"name", name},
                                  {"pass", err <= tolerance},
                                  {"value", value},
                                  {"expected", expected},
                                  {"tolerance", tolerance}});
    if (err > tolerance)
      failures_.push_back(name + " (value " + format_number(value) + ", expected " + format_number(expected) + ")");
    return err <= tolerance;
  }

  int finish(const RunConfig& config, std::ostream& out, std::ostream& err) const {
    const std::string text = doc_.dump(2) + "\n";
    if (config.output.empty() || config.command == "ricci-flow" || config.command == "phase-portrait") {
      out << text;
    } else {
      std::ofstream file(config.output, std::ios::binary);
      if (!file) throw IoFailure("cannot write " + config.output);
      file << text;
      if (!file) throw IoFailure("cannot write " + config.output);
    }
    for (const auto& f : failures_) err << "assertion failed: " << f << "\n";
    return failures_.empty() ? Success : AssertionFailure;
  }

 private:
  nlohmann::json doc_;
  std::vector<std::string> failures_;
};

FlagPtr space_of(const RunConfig& c) { return build_space(c.space); }

InvariantMetric metric_of(const RunConfig& c, const FlagSpace& flag) {
  return c.lambda.empty() ? InvariantMetric::normal(flag) : InvariantMetric(flag, c.lambda);
}

Root default_alpha(const RunConfig& c, const FlagSpace& flag) {
  const RootSystem& rs = flag.root_system();
  if (!c.alpha.empty()) return rs.parse(c.alpha);
  if (c.space.kind == "cp") return rs.sum(1, 1);
  if (c.space.kind == "su3-maxflag") return rs.difference(1, 3);
  throw Error(ErrorKind::Usage, "--alpha is required for a custom space");
}

LieElement default_vector(const RunConfig& c, const FlagSpace& flag) {
  if (!c.vector.empty()) return parse_vector(flag, c.vector);
  const Root alpha = default_alpha(c, flag);
  return LieElement::basis(flag.algebra(), flag.algebra()->index_of(BasisKind::A, alpha));
}

int cp_n(const RunConfig& c, int fallback) { return c.space.n > 0 ? c.space.n : fallback; }

FlowTolerances tolerances(const RunConfig& c) { return {c.rel_tol, c.abs_tol, c.max_step}; }

nlohmann::json pair_json(const FlagSpace& flag, const PerturbationPair& p) {
  const RootSystem& rs = flag.root_system();
  return {{"beta", rs.label(p.beta)}, {"delta", rs.label(p.delta)}, {"rate", p.rate}};
}

PerturbationPair first_pair(const FlagSpace& flag, const Root& alpha) {
  const auto pairs = find_perturbation_pairs(flag, alpha);
  if (pairs.empty())
    throw Error(ErrorKind::Usage, "no perturbation pair for " + flag.root_system().label(alpha));
  return pairs.front();
}

// largest deviation of the transported A_beta from a rotation in span{A_beta, A_delta} at the pair rate
double rotation_defect(const FlagSpace& flag, const PerturbationPair& p) {
  const RealizationPtr& g = flag.algebra();
  const LieElement x = LieElement::basis(g, g->index_of(BasisKind::A, p.alpha));
  const LieElement ab = LieElement::basis(g, g->index_of(BasisKind::A, p.beta));
  const LieElement ad = LieElement::basis(g, g->index_of(BasisKind::A, p.delta));
  double worst = 0.0;
  for (double t : {0.5, 1.7, 4.0}) {
    const LieElement v = transport(x, t, ab);
    const double cb = killing_form(v, ab) / killing_form(ab, ab);
    const double cd = killing_form(v, ad) / killing_form(ad, ad);
    worst = std::max({worst, std::abs(cb - std::cos(p.rate * t)),
                      std::abs(std::abs(cd) - std::abs(std::sin(p.rate * t))),
                      (v - cb * ab - cd * ad).coeffs().cwiseAbs().maxCoeff()});
  }
  return worst;
}

double second_difference(const FlagSpace& flag, const InvariantMetric& lambda, const LieElement& x,
                         const VariationCurve& q) {
  const double h = 1e-3;
  return (variation_energy(flag, lambda, x, q, h) - 2.0 * variation_energy(flag, lambda, x, q, 0.0) +
          variation_energy(flag, lambda, x, q, -h)) /
         (h * h);
}

// ---------------------------------------------------------------------------
// commands

int cmd_describe(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const FlagPtr flag = space_of(c);
  Report r(c);
  const RootSystem& rs = flag->root_system();
  nlohmann::json doc = to_json(*flag);
  std::vector<std::string> positive, theta;
  for (const Root& root : rs.positive()) positive.push_back(rs.label(root));
  for (const Root& root : flag->theta_roots()) theta.push_back(rs.label(root));
  std::vector<int> dims;
  for (const auto& comp : flag->components()) dims.push_back(comp.dimension());
  r.results() = doc;
  r.results()["positive_roots"] = positive;
  r.results()["theta_roots"] = theta;
  r.results()["dimensions"] = dims;
  r.results()["m_dimension"] = flag->m_dimension();
  r.results()["algebra_dimension"] = flag->algebra()->dimension();
  return r.finish(c, out, err);
}

int cmd_check_vector(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const FlagPtr flag = space_of(c);
  const InvariantMetric lambda = metric_of(c, *flag);
  const LieElement x = default_vector(c, *flag);
  Report r(c);
  r.results()["lambda"] = lambda.lambda();
  r.results()["geodesic_residual"] = geodesic_residual(*flag, lambda, x);
  r.results()["geodesic"] = is_geodesic_vector(*flag, lambda, x);
  r.results()["equigeodesic_residual"] = equigeodesic_residual(*flag, x);
  r.results()["equigeodesic"] = is_equigeodesic_vector(*flag, x);
  r.results()["energy_unit_interval"] = curve_energy(*flag, lambda, x, 1.0);
  return r.finish(c, out, err);
}

int cmd_index_form(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const FlagPtr flag = space_of(c);
  const InvariantMetric lambda = metric_of(c, *flag);
  const LieElement x = default_vector(c, *flag);
  const PerturbationPair pair = first_pair(*flag, default_alpha(c, *flag));
  const double b = c.b.value_or(1.0), k = c.k.value_or(1.0);
  const VariationCurve q = build_q0(*flag, pair, b, k);
  Report r(c);
  const double index = index_form(*flag, lambda, x, q);
  const double fd = second_difference(*flag, lambda, x, q);
  r.results()["pair"] = pair_json(*flag, pair);
  r.results()["b"] = b;
  r.results()["k"] = k;
  r.results()["I"] = index;
  r.results()["second_difference"] = fd;
  r.near("index form vs second difference", fd, index, 1e-4, true);
  return r.finish(c, out, err);
}

int cmd_pairs(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const FlagPtr flag = space_of(c);
  const Root alpha = default_alpha(c, *flag);
  Report r(c);
  nlohmann::json list = nlohmann::json::array();
  for (const auto& p : find_perturbation_pairs(*flag, alpha)) {
    list.push_back(pair_json(*flag, p));
    r.check("rotation " + flag->root_system().label(p.beta), rotation_defect(*flag, p) < 1e-9,
            rotation_defect(*flag, p), 1e-9);
  }
  r.results()["alpha"] = flag->root_system().label(alpha);
  r.results()["pairs"] = list;
  return r.finish(c, out, err);
}

int cmd_witness(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const FlagPtr flag = space_of(c);
  const PerturbationPair pair = first_pair(*flag, default_alpha(c, *flag));
  const ConjugateWitness w = assemble_witness(flag, pair, c.b.value_or(1.0), c.k.value_or(1.0), c.xi);
  Report r(c);
  r.results() = to_json(w);
  r.near("formula vs direct", w.value(), w.index.direct, 1e-8, true);
  r.check("index negative", w.value() < 0.0, w.value(), 0.0);
  return r.finish(c, out, err);
}

int cmd_conjtime(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const FlagPtr flag = space_of(c);
  const InvariantMetric lambda = metric_of(c, *flag);
  const LieElement x = default_vector(c, *flag);
  const ConjugateEstimate e = first_conjugate_estimate(*flag, lambda, x, c.lo, c.hi, c.mesh);
  Report r(c);
  r.results()["estimate"] = e.estimate;
  r.results()["bracket"] = {e.lo, e.hi};
  r.results()["evaluations"] = e.evaluations;
  return r.finish(c, out, err);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoFailure("cannot write " + path);
  file << text;
  file.flush();
  if (!file) throw IoFailure("cannot write " + path);
}

int cmd_ricci_flow(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const int n = cp_n(c, 10);
  const Trajectory traj = integrate(n, {c.x, c.y}, c.t_end, tolerances(c));
  std::ostringstream csv;
  write_trajectory_csv(csv, traj);
  if (c.output.empty()) {
    out << csv.str();
    return Success;
  }
  write_file(c.output, csv.str());
  Report r(c);
  const FlowState end = traj.samples.back().state;
  r.results()["samples"] = traj.samples.size();
  r.results()["halt"] = traj.halt;
  r.results()["final_t"] = traj.samples.back().t;
  r.results()["final_state"] = {end.x, end.y};
  r.results()["final_region"] = to_string(classify(n, end));
  r.results()["csv"] = c.output;
  return r.finish(c, out, err);
}

std::string sibling_trajectories(const std::string& path) {
  const std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + "_trajectories.csv")).string();
}

int cmd_phase_portrait(const RunConfig& c, std::ostream& out, std::ostream& err) {
  PortraitConfig pc;
  pc.n = cp_n(c, 10);
  pc.nx = c.grid_x;
  pc.ny = c.grid_y;
  pc.starts = c.traj;
  pc.span = c.t_end;
  const Portrait p = phase_portrait(pc, tolerances(c));
  std::ostringstream field;
  write_field_csv(field, p);
  if (!c.svg.empty()) {
    std::ostringstream svg;
    write_portrait_svg(svg, p);
    write_file(c.svg, svg.str());
  }
  if (c.output.empty()) {
    out << field.str();
    return Success;
  }
  write_file(c.output, field.str());
  Report r(c);
  r.results()["field_csv"] = c.output;
  r.results()["field_rows"] = p.field.size();
  r.results()["trajectories"] = p.trajectories.size();
  if (!p.trajectories.empty()) {
    std::ostringstream trajs;
    write_trajectories_csv(trajs, p);
    write_file(sibling_trajectories(c.output), trajs.str());
    r.results()["trajectories_csv"] = sibling_trajectories(c.output);
  }
  if (!c.svg.empty()) r.results()["svg"] = c.svg;
  const InvariantLines lines = invariant_lines(pc.n);
  r.results()["invariant_lines"] = {lines.upper.str(), lines.lower.str()};
  return r.finish(c, out, err);
}

// ---------------------------------------------------------------------------
// reproduce targets

void witness_block(Report& r, const FlagPtr& flag, const Root& alpha, const RunConfig& c) {
  const PerturbationPair pair = first_pair(*flag, alpha);
  const double b = c.b.value_or(1.0), k = c.k.value_or(1.0);
  const ConjugateWitness w = assemble_witness(flag, pair, b, k, c.xi);
  const double rate = std::abs(pair.rate);
  r.results()["witness"] = to_json(w);
  r.results()["pair_count"] = find_perturbation_pairs(*flag, alpha).size();
  r.near("N closed form", w.n, n_closed_form(b, k), 1e-8, true);
  r.near("M - 4N closed form", w.m - 4.0 * w.n, -8.0 * rate * b * b / pi, 1e-8, true);
  r.near("formula vs direct", w.value(), w.index.direct, 1e-8, true);
  r.check("xi inside interval", w.xi_range.contains(w.xi), w.xi, 0.0);
  r.check("index negative", w.value() < 0.0, w.value(), 0.0);
  const LieElement x = LieElement::basis(flag->algebra(), flag->algebra()->index_of(BasisKind::A, alpha));
  const VariationCurve q = build_q0(*flag, pair, b, k);
  const InvariantMetric nm = InvariantMetric::normal(*flag);
  r.near("index form vs second difference", second_difference(*flag, nm, x, q), w.m, 1e-4, true);
}

int reproduce_cp_witness(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const int n = cp_n(c, 1);
  RunConfig cc = c;
  cc.space = {"cp", n, "C", n + 1, {}};
  const FlagPtr flag = cp_space(n);
  Report r(c);
  r.results()["n"] = n;
  r.results()["m"] = cp_rate(n);
  const Root alpha = flag->root_system().sum(1, 1);
  witness_block(r, flag, alpha, cc);
  r.check("pair count", find_perturbation_pairs(*flag, alpha).size() == static_cast<std::size_t>(n),
          static_cast<double>(find_perturbation_pairs(*flag, alpha).size()), 0.0);
  return r.finish(c, out, err);
}

int reproduce_optimal_k(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const int n = cp_n(c, 10);
  const double b = c.b.value_or(7.5), m = cp_rate(n);
  const OptimalK k = optimal_k(b, m);
  const Interval window = admissible_b(n);
  Report r(c);
  r.results()["n"] = n;
  r.results()["b"] = b;
  r.results()["m"] = m;
  r.results()["k_star"] = k.k_star;
  r.results()["k_numeric"] = k.numeric_k;
  r.results()["max_ratio"] = k.max_ratio;
  r.results()["ratio_numeric"] = k.numeric_ratio;
  r.results()["b_window"] = {window.lo, window.hi};
  r.near("k* closed form", k.numeric_k, b / (std::pow(6.0, 0.25) * std::sqrt(pi)), 1e-6, true);
  r.near("max ratio closed form", k.numeric_ratio, b * m * std::sqrt(6.0) / (2.0 * pi * pi), 1e-6, true);
  if (n == 10) {
    r.near("window lower end", window.lo, 7.347, 5e-3, false);
    r.near("window upper end", window.hi, 7.695, 5e-4, false);
  }
  return r.finish(c, out, err);
}

int reproduce_ricci_pipeline(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const int n = cp_n(c, 10);
  const RicciPipelineReport p = ricci_conjugate_pipeline(n, c.b.value_or(7.5), tolerances(c));
  Report r(c);
  r.results() = to_json(p);
  r.check("zeta interval nonempty", !p.zeta_range.empty(), p.zeta_range.hi - p.zeta_range.lo, 0.0);
  r.check("r0 positive", p.crossing.r0 > 0.0, p.crossing.r0, 0.0);
  r.check("crossing in R2", p.crossing_region == Region::R2, p.crossing.state.y / p.crossing.state.x, 0.0);
  r.near("scaled vs direct index", p.index_scaled, p.index_direct, 1e-8, true);
  r.check("final index negative", p.index_direct < 0.0, p.index_direct, 0.0);
  return r.finish(c, out, err);
}

int reproduce_su3_witness(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const FlagPtr flag = su3_maximal_flag();
  const Root alpha = flag->root_system().difference(1, 3);
  Report r(c);
  witness_block(r, flag, alpha, c);
  const PerturbationPair pair = first_pair(*flag, alpha);
  const double b = c.b.value_or(1.0), k = c.k.value_or(1.0);
  const ConjugateWitness mid = assemble_witness(flag, pair, b, k);
  if (b == 1.0 && k == 1.0) r.near("xi upper bound", mid.xi_range.hi, -0.98705, 1e-5, false);
  nlohmann::json samples = nlohmann::json::array();
  for (double s : {0.1, 0.5, 0.9}) {
    const double xi = mid.xi_range.lo + s * (mid.xi_range.hi - mid.xi_range.lo);
    const double value = assemble_witness(flag, pair, b, k, xi).value();
    samples.push_back({{"xi", xi}, {"I", value}});
    r.check("negative at sampled xi " + format_number(xi), value < 0.0, value, 0.0);
  }
  r.results()["samples"] = samples;
  const double outside = assemble_witness(flag, pair, b, k, -0.9).value();
  r.results()["I_at_xi_-0.9"] = outside;
  if (mid.xi_range.hi < -0.9) r.check("positive outside the interval", outside > 0.0, outside, 0.0);
  return r.finish(c, out, err);
}

int reproduce_conjtime(const RunConfig& c, const FlagPtr& flag, const Root& alpha, std::ostream& out,
                       std::ostream& err) {
  const LieElement x = LieElement::basis(flag->algebra(), flag->algebra()->index_of(BasisKind::A, alpha));
  const ConjugateEstimate e =
      first_conjugate_estimate(*flag, InvariantMetric::normal(*flag), x, c.lo, c.hi, c.mesh);
  Report r(c);
  const double target = pi * std::sqrt(6.0) / 2.0;
  r.results()["estimate"] = e.estimate;
  r.results()["bracket"] = {e.lo, e.hi};
  r.results()["evaluations"] = e.evaluations;
  r.results()["mesh"] = c.mesh;
  r.near("estimate within 2%", e.estimate, target, 0.02, true);
  return r.finish(c, out, err);
}

int cmd_reproduce(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.name == "thm4.4") return reproduce_cp_witness(c, out, err);
  if (c.name == "lemma4.7") return reproduce_optimal_k(c, out, err);
  if (c.name == "thm4.10") return reproduce_ricci_pipeline(c, out, err);
  if (c.name == "example5.4") return reproduce_su3_witness(c, out, err);
  if (c.name == "conjtime-cp3") {
    const FlagPtr flag = cp_space(1);
    return reproduce_conjtime(c, flag, flag->root_system().sum(1, 1), out, err);
  }
  if (c.name == "conjtime-su3") {
    const FlagPtr flag = su3_maximal_flag();
    return reproduce_conjtime(c, flag, flag->root_system().difference(1, 3), out, err);
  }
  throw Error(ErrorKind::Usage, "unknown reproduce target '" + c.name + "'");
}

}  // namespace

bool RunConfig::operator==(const RunConfig& o) const {
  auto same_traj = [&] {
    if (traj.size() != o.traj.size()) return false;
    for (std::size_t i = 0; i < traj.size(); ++i)
      if (traj[i].x != o.traj[i].x || traj[i].y != o.traj[i].y) return false;
    return true;
  };
  return command == o.command && name == o.name && space == o.space && lambda == o.lambda && vector == o.vector &&
         alpha == o.alpha && b == o.b && k == o.k && xi == o.xi && mesh == o.mesh && lo == o.lo && hi == o.hi &&
         t_end == o.t_end && x == o.x && y == o.y && rel_tol == o.rel_tol && abs_tol == o.abs_tol &&
         max_step == o.max_step && grid_x == o.grid_x && grid_y == o.grid_y && same_traj() && format == o.format &&
         output == o.output && svg == o.svg;
}

std::string emit(const RunConfig& c) {
  KeyValues kv;
  kv["command"] = c.command;
  kv["name"] = c.name;
  kv["space"] = c.space.kind;
  kv["n"] = std::to_string(c.space.n);
  kv["family"] = c.space.family;
  kv["rank"] = std::to_string(c.space.rank);
  std::string theta;
  for (std::size_t i = 0; i < c.space.theta.size(); ++i) theta += (i ? "," : "") + std::to_string(c.space.theta[i]);
  kv["theta"] = theta;
  kv["lambda"] = join_numbers(c.lambda);
  kv["vector"] = c.vector;
  kv["alpha"] = c.alpha;
  if (c.b) kv["b"] = format_number(*c.b);
  if (c.k) kv["k"] = format_number(*c.k);
  if (c.xi) kv["xi"] = format_number(*c.xi);
  kv["mesh"] = std::to_string(c.mesh);
  kv["lo"] = format_number(c.lo);
  kv["hi"] = format_number(c.hi);
  kv["t-end"] = format_number(c.t_end);
  kv["x"] = format_number(c.x);
  kv["y"] = format_number(c.y);
  kv["rel-tol"] = format_number(c.rel_tol);
  kv["abs-tol"] = format_number(c.abs_tol);
  kv["max-step"] = format_number(c.max_step);
  kv["grid"] = std::to_string(c.grid_x) + "x" + std::to_string(c.grid_y);
  std::string traj;
  for (std::size_t i = 0; i < c.traj.size(); ++i)
    traj += (i ? ";" : "") + format_number(c.traj[i].x) + "," + format_number(c.traj[i].y);
  kv["traj"] = traj;
  kv["format"] = c.format;
  kv["output"] = c.output;
  kv["svg"] = c.svg;
  std::string out;
  for (const auto& [key, value] : kv) out += key + "=" + value + "\n";
  return out;
}

KeyValues parse_key_values(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::Usage, "config line " + std::to_string(number) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (!kKeys.count(key)) throw Error(ErrorKind::Usage, "config line " + std::to_string(number) + ": unknown key '" + key + "'");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

RunConfig apply(RunConfig c, const KeyValues& entries) {
  for (const auto& [key, value] : entries) {
    if (key == "command") {
      c.command = value;
    } else if (key == "name") {
      c.name = value;
    } else if (key == "space") {
      c.space.kind = value;
    } else if (key == "n") {
      c.space.n = to_int(key, value);
    } else if (key == "family") {
      c.space.family = value;
    } else if (key == "rank") {
      c.space.rank = to_int(key, value);
    } else if (key == "theta") {
      c.space.theta.clear();
      for (const auto& t : split(value, ',')) c.space.theta.push_back(to_int(key, t));
    } else if (key == "lambda") {
      c.lambda.clear();
      for (const auto& t : split(value, ',')) c.lambda.push_back(to_double(key, t));
    } else if (key == "vector") {
      c.vector = value;
    } else if (key == "alpha") {
      c.alpha = value;
    } else if (key == "b") {
      c.b = to_double(key, value);
    } else if (key == "k") {
      c.k = to_double(key, value);
    } else if (key == "xi") {
      c.xi = to_double(key, value);
    } else if (key == "mesh") {
      c.mesh = to_int(key, value);
    } else if (key == "lo") {
      c.lo = to_double(key, value);
    } else if (key == "hi") {
      c.hi = to_double(key, value);
    } else if (key == "t-end") {
      c.t_end = to_double(key, value);
    } else if (key == "x") {
      c.x = to_double(key, value);
    } else if (key == "y") {
      c.y = to_double(key, value);
    } else if (key == "rel-tol") {
      c.rel_tol = to_double(key, value);
    } else if (key == "abs-tol") {
      c.abs_tol = to_double(key, value);
    } else if (key == "max-step") {
      c.max_step = to_double(key, value);
    } else if (key == "grid") {
      const auto xpos = value.find('x');
      if (xpos == std::string::npos) throw Error(ErrorKind::Usage, "grid must look like 20x20");
      c.grid_x = to_int(key, value.substr(0, xpos));
      c.grid_y = to_int(key, value.substr(xpos + 1));
    } else if (key == "traj") {
      c.traj.clear();
      for (const auto& point : split(value, ';')) {
        const auto xy = split(point, ',');
        if (xy.size() != 2) throw Error(ErrorKind::Usage, "trajectory start must look like 1,1");
        c.traj.push_back({to_double(key, xy[0]), to_double(key, xy[1])});
      }
    } else if (key == "format") {
      c.format = value;
    } else if (key == "output") {
      c.output = value;
    } else if (key == "svg") {
      c.svg = value;
    } else {
      throw Error(ErrorKind::Usage, "unknown key '" + key + "'");
    }
  }
  return c;
}

RunConfig parse_config(const std::string& text) { return cli::apply(RunConfig{}, parse_key_values(text)); }

FlagPtr build_space(const SpaceSpec& spec) {
  if (spec.kind == "cp") {
    const int n = spec.n > 0 ? spec.n : 1;
    return cp_space(n);
  }
  if (spec.kind == "su3-maxflag") return su3_maximal_flag();
  if (spec.kind == "custom") {
    if (spec.rank < 1) throw Error(ErrorKind::Usage, "rank must be positive");
    const Family family = parse_family(spec.family);
    std::vector<int> theta;
    for (int t : spec.theta) {
      if (t < 1 || t > spec.rank)
        throw Error(ErrorKind::Usage, "theta index " + std::to_string(t) + " outside 1.." + std::to_string(spec.rank));
      theta.push_back(t - 1);
    }
    return build_flag(build_realization(build_root_system(family, spec.rank)), theta);
  }
  throw Error(ErrorKind::Usage, "unknown space '" + spec.kind + "'");
}

LieElement parse_vector(const FlagSpace& flag, const std::string& text) {
  const RealizationPtr& g = flag.algebra();
  LieElement x = LieElement::zero(g);
  const auto terms = split(text, ',');
  if (terms.empty()) throw Error(ErrorKind::Usage, "empty vector");
  for (std::string term : terms) {
    double sign = 1.0;
    if (!term.empty() && (term[0] == '-' || term[0] == '+')) {
      sign = term[0] == '-' ? -1.0 : 1.0;
      term = trim(term.substr(1));
    }
    double coeff = 1.0;
    const auto star = term.find('*');
    if (star != std::string::npos) {
      coeff = to_double("vector coefficient", trim(term.substr(0, star)));
      term = trim(term.substr(star + 1));
    }
    x = x + (sign * coeff) * LieElement::basis(g, g->parse_basis_label(term));
  }
  return x;
}

int execute(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (!kCommands.count(c.command)) throw Error(ErrorKind::Usage, "unknown command '" + c.command + "'");
    if (c.format != "json" && c.format != "csv" && c.format != "svg")
      throw Error(ErrorKind::Usage, "format must be json, csv or svg");
    if (c.command == "describe") return cmd_describe(c, out, err);
    if (c.command == "check-vector") return cmd_check_vector(c, out, err);
    if (c.command == "index-form") return cmd_index_form(c, out, err);
    if (c.command == "pairs") return cmd_pairs(c, out, err);
    if (c.command == "witness") return cmd_witness(c, out, err);
    if (c.command == "conjtime") return cmd_conjtime(c, out, err);
    if (c.command == "ricci-flow") return cmd_ricci_flow(c, out, err);
    if (c.command == "phase-portrait") return cmd_phase_portrait(c, out, err);
    return cmd_reproduce(c, out, err);
  } catch (const IoFailure& e) {
    err << "flagvar: " << e.what() << "\n";
    return IoError;
  } catch (const Error& e) {
    err << "flagvar: " << e.what() << "\n";
    return is_usage_kind(e.kind()) ? UsageError : AssertionFailure;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variational tools for geodesics on generalized flag manifolds"};
  app.get_formatter()->column_width(34);
  std::string command, name, config_path;
  app.add_option("command", command, "One of: describe, check-vector, index-form, pairs, witness, conjtime, "
                                      "ricci-flow, phase-portrait, reproduce")
      ->required();
  app.add_option("name", name, "reproduce target: thm4.4, lemma4.7, thm4.10, example5.4, conjtime-cp3, conjtime-su3");
  app.add_option("--config", config_path, "key=value file supplying defaults; flags override it");

  std::map<std::string, std::string> flags;
  const std::vector<std::pair<std::string, std::string>> described{
      {"space", "cp (C_{n+1}, twistor Theta), su3-maxflag or custom [cp]"},
      {"n", "size parameter of the cp space [1; 10 for ricci commands]"},
      {"family", "root system family for --space custom: A or C [C]"},
      {"rank", "rank for --space custom [2]"},
      {"lambda", "metric weights per isotropy component, comma separated [normal metric]"},
      {"vector", "Lie algebra element, e.g. A11,0.5*S12+ [A of alpha]"},
      {"alpha", "root label such as a11 [a11 on cp, a13 on su3-maxflag]"},
      {"b", "curve length [1; 7.5 for lemma4.7 and thm4.10]"},
      {"k", "amplitude of the canonical variation [1]"},
      {"xi", "perturbation of the unprotected components [midpoint of the admissible interval]"},
      {"mesh", "elements for the conjugate-time estimate [24]"},
      {"lo", "lower end of the conjugate-time bracket [1]"},
      {"hi", "upper end of the conjugate-time bracket [8]"},
      {"t-end", "flow time; negative integrates backward [10]"},
      {"x", "first metric weight of the flow start [1]"},
      {"y", "second metric weight of the flow start [1]"},
      {"rel-tol", "integrator relative tolerance [1e-10]"},
      {"abs-tol", "integrator absolute tolerance [1e-12]"},
      {"max-step", "integrator step cap [0.1]"},
      {"grid", "phase-portrait sampling grid [20x20]"},
      {"format", "json, csv or svg [json]"},
      {"output", "output path [stdout]"},
      {"svg", "phase-portrait SVG path [none]"},
  };
  for (const auto& [key, help] : described) app.add_option("--" + key, flags[key], help);
  std::string theta;
  auto* theta_opt = app.add_option("--theta", theta, "1-based simple root positions, comma separated; may be empty")
                        ->expected(0, 1);
  std::vector<std::string> traj;
  app.add_option("--traj", traj, "trajectory start x,y; repeatable");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? Success : UsageError;
  }

  try {
    RunConfig config;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        err << "flagvar: cannot read " << config_path << "\n";
        return IoError;
      }
      std::stringstream buf;
      buf << in.rdbuf();
      config = parse_config(buf.str());
    }
    KeyValues overrides;
    overrides["command"] = command;
    if (!name.empty()) overrides["name"] = name;
    for (const auto& [key, help] : described)
      if (app.count("--" + key) > 0) overrides[key] = flags[key];
    if (theta_opt->count() > 0) overrides["theta"] = theta;
    if (!traj.empty()) {
      std::string joined;
      for (std::size_t i = 0; i < traj.size(); ++i) joined += (i ? ";" : "") + traj[i];
      overrides["traj"] = joined;
    }
    if ((app.count("--family") || app.count("--rank") || theta_opt->count()) && !app.count("--space"))
      overrides["space"] = "custom";
    config = cli::apply(config, overrides);
    if (config.command == "reproduce" && !kReproduce.count(config.name))
      throw Error(ErrorKind::Usage, "reproduce needs one of thm4.4, lemma4.7, thm4.10, example5.4, conjtime-cp3, "
                                    "conjtime-su3");
    return execute(config, out, err);
  } catch (const Error& e) {
    err << "flagvar: " << e.what() << "\n";
    return UsageError;
  }
}

}  // namespace flagvar::cli
