#include "flagvar/ricciflow.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include <boost/math/constants/constants.hpp>
#include <boost/numeric/odeint.hpp>

#include "flagvar/error.hpp"
#include "flagvar/geodesy.hpp"
#include "flagvar/spaces.hpp"

namespace flagvar {

namespace odeint = boost::numeric::odeint;

namespace {

constexpr double pi = boost::math::constants::pi<double>();
using State = std::array<double, 2>;

void require_positive(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0)) throw Error(ErrorKind::Domain, "metric coordinates must be positive");
}

// flow_field without the positivity check, for trial stages near the boundary
State raw_field(int n, const State& s) {
  const double q = s[0] / s[1];
  return {4.0 / (2 * n + 4) + (2.0 * n / (4 * n + 8)) * q * q,
          (7.0 + 4 * n) / (4 * n + 8) - (6.0 / (16 * n + 32)) * q};
}

struct RawField {
  int n;
  void operator()(const State& s, State& d, double) const { d = raw_field(n, s); }
};

}  // namespace

RicciComponents ricci_components(int n, double x, double y) {
  require_positive(x, y);
  const double q = x / y;
  return {-4.0 / (2 * n + 4) - (2.0 * n / (4 * n + 8)) * q * q,
          -(7.0 + 4 * n) / (4 * n + 8) + (6.0 / (16 * n + 32)) * q};
}

FlowState flow_field(int n, double x, double y) {
  require_positive(x, y);
  const State d = raw_field(n, {x, y});
  return {d[0], d[1]};
}

std::string Fraction::str() const { return std::to_string(num) + "/" + std::to_string(den); }

InvariantLines invariant_lines(int n) {
  long num = 4L * n + 3, den = 8;
  const long g = std::gcd(num, den);
  return {{num / g, den / g}, {1, 2}};
}

std::string to_string(Region r) {
  switch (r) {
    case Region::R1: return "R1";
    case Region::Gamma1: return "gamma1";
    case Region::R2: return "R2";
    case Region::Gamma2: return "gamma2";
    case Region::R3: return "R3";
  }
  return "?";
}

Region classify(int n, const FlowState& s, double band) {
  require_positive(s.x, s.y);
  const InvariantLines lines = invariant_lines(n);
  const double ratio = s.y / s.x;
  const double upper = lines.upper.value(), lower = lines.lower.value();
  if (std::abs(ratio - upper) <= band * upper) return Region::Gamma1;
  if (std::abs(ratio - lower) <= band * lower) return Region::Gamma2;
  if (ratio > upper) return Region::R1;
  if (ratio > lower) return Region::R2;
  return Region::R3;
}

Trajectory integrate(int n, const FlowState& start, double t_end, const FlowTolerances& tol) {
  require_positive(start.x, start.y);
  Trajectory traj{n, t_end < 0.0 ? -1 : +1, {{0.0, start}}, {}, "completed"};
  auto stepper = odeint::make_controlled(tol.abs, tol.rel, odeint::runge_kutta_dopri5<State>());
  const RawField sys{n};
  State s{start.x, start.y};
  double t = 0.0;
  double dt = traj.direction * std::min(tol.max_step, 0.01);
  const double span = std::abs(t_end);
  while (std::abs(t) < span) {
    double step = traj.direction * std::min({std::abs(dt), tol.max_step, span - std::abs(t)});
    const double t_before = t;
    State trial = s;
    if (stepper.try_step(sys, trial, t, step) == odeint::fail) {
      dt = step;
      if (std::abs(dt) < 1e-14) {
        traj.halt = "step size underflow";
        break;
      }
      continue;
    }
    dt = step;
    if (!(trial[0] > 0.0) || !(trial[1] > 0.0) || !std::isfinite(trial[0]) || !std::isfinite(trial[1])) {
      traj.halt = "positivity lost";
      break;
    }
    s = trial;
    traj.steps.push_back(t - t_before);
    traj.samples.push_back({t, {s[0], s[1]}});
  }
  return traj;
}

Crossing homothety_crossing(int n, const FlowState& start, double zeta, const FlowTolerances& tol,
                            double max_span, int direction) {
  require_positive(start.x, start.y);
  if (!(zeta > 0.0)) throw Error(ErrorKind::Domain, "zeta must be positive");
  const double target = 1.0 / zeta;
  auto gap = [&](const State& s) { return s[1] / s[0] - target; };

  State s{start.x, start.y};
  const double g0 = gap(s);
  if (g0 == 0.0) return {0.0, start.y, start, 0};
  auto stepper = odeint::make_controlled(tol.abs, tol.rel, odeint::runge_kutta_dopri5<State>());
  odeint::runge_kutta_dopri5<State> single;
  const RawField sys{n};
  double t = 0.0;
  double dt = direction * std::min(tol.max_step, 0.01);
  int steps = 0;
  while (std::abs(t) < max_span) {
    double step = direction * std::min(std::abs(dt), tol.max_step);
    const double t_before = t;
    State trial = s;
    if (stepper.try_step(sys, trial, t, step) == odeint::fail) {
      dt = step;
      if (std::abs(dt) < 1e-14) break;
      continue;
    }
    dt = step;
    ++steps;
    if (!(trial[0] > 0.0) || !(trial[1] > 0.0)) break;
    if ((gap(trial) > 0.0) != (g0 > 0.0) || gap(trial) == 0.0) {
      // bisect on the step from the last accepted state
      const State slope = raw_field(n, s);
      auto advance = [&](double tau) {
        State out, unused;
        single.do_step(sys, s, slope, t_before, out, unused, tau);
        return out;
      };
      double lo = 0.0, hi = t - t_before;
      while (std::abs(hi - lo) > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        ((gap(advance(mid)) > 0.0) == (g0 > 0.0) ? lo : hi) = mid;
      }
      const State at = advance(0.5 * (lo + hi));
      return {t_before + 0.5 * (lo + hi), at[1], {at[0], at[1]}, steps};
    }
    s = trial;
  }
  throw Error(ErrorKind::Search, "ray y/x = " + format_number(target) + " not reached");
}

Interval admissible_b(int n) {
  const double m = cp_rate(n);
  return {8.0 * std::sqrt(6.0) * pi * pi / (3.0 * m * (4.0 * n + 3.0)), pi / (2.0 * m)};
}

RicciPipelineReport ricci_conjugate_pipeline(int n, double b, const FlowTolerances& tol,
                                             const QuadratureConfig& quad) {
  if (n < 10) throw Error(ErrorKind::Parameter, "the pipeline needs n >= 10");
  RicciPipelineReport r{};
  r.n = n;
  r.b = b;
  r.m = cp_rate(n);
  r.b_window = admissible_b(n);
  if (!r.b_window.contains(b))
    throw Error(ErrorKind::Parameter, "b = " + format_number(b) + " outside (" + format_number(r.b_window.lo) +
                                          ", " + format_number(r.b_window.hi) + ")");
  r.k = optimal_k(b, r.m, quad);

  const FlagPtr flag = cp_space(n);
  const RootSystem& rs = flag->root_system();
  const Root alpha = rs.sum(1, 1);
  const PerturbationPair pair{alpha, flag->component_of(alpha), rs.difference(1, 2), rs.sum(1, 2),
                              flag->algebra()->structure_constant(-alpha, rs.difference(1, 2))};
  const LieElement x = LieElement::basis(flag->algebra(), BasisKind::A, alpha);
  const MNDecomposition mn = mn_decomposition(*flag, x, pair, b, r.k.k_star, quad);
  r.big_m = mn.m;
  r.big_n = mn.n;
  r.zeta_range = {8.0 / (4.0 * n + 3.0), 1.0 - mn.m / (4.0 * mn.n)};
  if (r.zeta_range.empty()) throw Error(ErrorKind::Parameter, "empty zeta interval");
  r.zeta = r.zeta_range.midpoint();

  r.crossing = homothety_crossing(n, {1.0, 1.0}, r.zeta, tol);
  r.crossing_region = classify(n, r.crossing.state);

  const VariationCurve q0 = build_q0(*flag, pair, b, r.k.k_star);
  const int sigma1 = flag->component_of(pair.beta);
  std::vector<double> unit(flag->components().size(), 1.0);
  unit[sigma1] = r.zeta;
  const InvariantMetric g_unit(*flag, unit);
  r.index_unit = index_form(*flag, g_unit, x, q0, quad);
  r.index_scaled = r.crossing.r0 * r.index_unit;
  r.index_direct = index_form(*flag, g_unit.scaled(r.crossing.r0), x, q0, quad);
  if (std::abs(r.index_scaled - r.index_direct) > 1e-8 * std::abs(r.index_direct))
    throw Error(ErrorKind::Consistency, "scaled and direct index values disagree");
  if (!(r.index_direct < 0.0)) throw Error(ErrorKind::Witness, "final index is not negative");
  return r;
}

nlohmann::json to_json(const RicciPipelineReport& r) {
  return {{"n", r.n},
          {"b", r.b},
          {"m", r.m},
          {"b_window", {r.b_window.lo, r.b_window.hi}},
          {"k_star", r.k.k_star},
          {"k_numeric", r.k.numeric_k},
          {"max_ratio", r.k.max_ratio},
          {"M", r.big_m},
          {"N", r.big_n},
          {"zeta_interval", {r.zeta_range.lo, r.zeta_range.hi}},
          {"zeta", r.zeta},
          {"t0", r.crossing.t0},
          {"r0", r.crossing.r0},
          {"crossing_state", {r.crossing.state.x, r.crossing.state.y}},
          {"crossing_region", to_string(r.crossing_region)},
          {"I_unit", r.index_unit},
          {"I_scaled", r.index_scaled},
          {"I_direct", r.index_direct}};
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,x,y,region\n";
  for (const auto& s : traj.samples)
    out << format_number(s.t) << ',' << format_number(s.state.x) << ',' << format_number(s.state.y) << ','
        << to_string(classify(traj.n, s.state)) << '\n';
}

Portrait phase_portrait(const PortraitConfig& config, const FlowTolerances& tol) {
  if (config.n < 1) throw Error(ErrorKind::Usage, "n must be at least 1");
  if (!(config.x_min > 0.0 && config.y_min > 0.0 && config.x_max > config.x_min && config.y_max > config.y_min))
    throw Error(ErrorKind::Usage, "grid bounds must be positive and increasing");
  if (config.nx < 1 || config.ny < 1) throw Error(ErrorKind::Usage, "grid needs at least one point per axis");
  Portrait p{config, {}, {}};
  auto coord = [](double lo, double hi, int count, int i) {
    return count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
  };
  for (int j = 0; j < config.ny; ++j)
    for (int i = 0; i < config.nx; ++i) {
      const FlowState at{coord(config.x_min, config.x_max, config.nx, i),
                         coord(config.y_min, config.y_max, config.ny, j)};
      p.field.push_back({at, flow_field(config.n, at.x, at.y), classify(config.n, at)});
    }
  for (const FlowState& s : config.starts) p.trajectories.push_back(integrate(config.n, s, config.span, tol));
  return p;
}

void write_field_csv(std::ostream& out, const Portrait& p) {
  out << "x,y,dx,dy,region\n";
  for (const auto& f : p.field)
    out << format_number(f.at.x) << ',' << format_number(f.at.y) << ',' << format_number(f.field.x) << ','
        << format_number(f.field.y) << ',' << to_string(f.region) << '\n';
}

void write_trajectories_csv(std::ostream& out, const Portrait& p) {
  out << "trajectory,t,x,y,region\n";
  for (std::size_t k = 0; k < p.trajectories.size(); ++k)
    for (const auto& s : p.trajectories[k].samples)
      out << k << ',' << format_number(s.t) << ',' << format_number(s.state.x) << ','
          << format_number(s.state.y) << ',' << to_string(classify(p.config.n, s.state)) << '\n';
}

void write_portrait_svg(std::ostream& out, const Portrait& p) {
  const PortraitConfig& c = p.config;
  const InvariantLines lines = invariant_lines(c.n);
  const double width = 600, height = 600, margin = 40;
  auto px = [&](double x) { return margin + (x - 0.0) / c.x_max * (width - 2 * margin); };
  auto py = [&](double y) { return height - margin - (y - 0.0) / c.y_max * (height - 2 * margin); };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return std::string(buf);
  };
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  out << "<metadata>{\"n\": " << c.n << ", \"invariant_lines\": [{\"name\": \"gamma1\", \"slope\": \""
      << lines.upper.str() << "\"}, {\"name\": \"gamma2\", \"slope\": \"" << lines.lower.str()
      << "\"}]}</metadata>\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << num(px(0)) << "\" y1=\"" << num(py(0)) << "\" x2=\"" << num(px(c.x_max)) << "\" y2=\""
      << num(py(0)) << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << num(px(0)) << "\" y1=\"" << num(py(0)) << "\" x2=\"" << num(px(0)) << "\" y2=\""
      << num(py(c.y_max)) << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << num(width - margin) << "\" y=\"" << num(height - 10) << "\">x</text>\n";
  out << "<text x=\"10\" y=\"" << num(margin) << "\">y</text>\n";
  for (const auto& [slope, name, color] : {std::tuple{lines.upper.value(), "gamma1", "red"},
                                           std::tuple{lines.lower.value(), "gamma2", "blue"}}) {
    const double x_end = std::min(c.x_max, c.y_max / slope);
    out << "<line class=\"" << name << "\" x1=\"" << num(px(0)) << "\" y1=\"" << num(py(0)) << "\" x2=\""
        << num(px(x_end)) << "\" y2=\"" << num(py(slope * x_end)) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
  }
  const double arrow = 0.35 * std::min(c.x_max / c.nx, c.y_max / c.ny);
  for (const auto& f : p.field) {
    const double len = std::hypot(f.field.x, f.field.y);
    if (len == 0.0) continue;
    const double ex = f.at.x + arrow * f.field.x / len, ey = f.at.y + arrow * f.field.y / len;
    out << "<line x1=\"" << num(px(f.at.x)) << "\" y1=\"" << num(py(f.at.y)) << "\" x2=\"" << num(px(ex))
        << "\" y2=\"" << num(py(ey)) << "\" stroke=\"gray\"/>\n";
  }
  for (const auto& traj : p.trajectories) {
    out << "<polyline fill=\"none\" stroke=\"green\" points=\"";
    for (const auto& s : traj.samples) {
      if (s.state.x > c.x_max || s.state.y > c.y_max) break;
      out << num(px(s.state.x)) << ',' << num(py(s.state.y)) << ' ';
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace flagvar
