#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "flagvar/conjugacy.hpp"

namespace flagvar {

/// Invariant metric (x, y) = (lambda_1, lambda_2) on CP^{2n+1}.
struct FlowState {
  double x;
  double y;
};

struct RicciComponents {
  double r1;
  double r2;
};

RicciComponents ricci_components(int n, double x, double y);
/// (dx/dt, dy/dt) of the two-summand flow; equal to -(r1, r2).
FlowState flow_field(int n, double x, double y);

struct Fraction {
  long num;
  long den;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
};

struct InvariantLines {
  Fraction upper;  // (4n + 3) / 8
  Fraction lower;  // 1 / 2
};

InvariantLines invariant_lines(int n);

enum class Region { R1, Gamma1, R2, Gamma2, R3 };
std::string to_string(Region r);

/// Depends only on y/x; ratios within `band` of a line count as on it.
Region classify(int n, const FlowState& s, double band = 1e-12);

struct FlowTolerances {
  double rel = 1e-10;
  double abs = 1e-12;
  double max_step = 0.1;
};

struct TrajectorySample {
  double t;
  FlowState state;
};

struct Trajectory {
  int n;
  int direction;  // +1 forward, -1 backward
  std::vector<TrajectorySample> samples;
  std::vector<double> steps;  // accepted step sizes
  std::string halt;           // "completed" or the reason integration stopped
};

/// Adaptive Dormand-Prince 5(4) from t = 0 to t_end (negative for backward).
Trajectory integrate(int n, const FlowState& start, double t_end, const FlowTolerances& tol = {});

struct Crossing {
  double t0;
  double r0;
  FlowState state;
  int steps;
};

/// First time the trajectory from `start` meets the ray y/x = 1/zeta.
/// Throws a search error if it is not reached within `max_span`.
Crossing homothety_crossing(int n, const FlowState& start, double zeta, const FlowTolerances& tol = {},
                            double max_span = 1e6, int direction = +1);

/// Window of b for which the zeta interval of the pipeline is nonempty and b
/// stays below the first conjugate time pi/(2m).
Interval admissible_b(int n);

struct RicciPipelineReport {
  int n;
  double b;
  double m;
  Interval b_window;
  OptimalK k;
  double big_m;
  double big_n;
  Interval zeta_range;
  double zeta;
  Crossing crossing;
  Region crossing_region;
  double index_unit;    // I under (zeta, 1)
  double index_scaled;  // r0 * index_unit
  double index_direct;  // I under (r0 zeta, r0)
};

/// Parameter error when n < 10, b lies outside admissible_b, or the zeta
/// interval is empty; consistency error when the two final index values
/// disagree; witness error when they are not negative.
RicciPipelineReport ricci_conjugate_pipeline(int n, double b, const FlowTolerances& tol = {},
                                             const QuadratureConfig& quad = {});

nlohmann::json to_json(const RicciPipelineReport& r);

void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

struct PortraitConfig {
  int n = 10;
  double x_min = 0.1, x_max = 4.0;
  double y_min = 0.1, y_max = 4.0;
  int nx = 20, ny = 20;
  std::vector<FlowState> starts;
  double span = 5.0;
};

struct FieldSample {
  FlowState at;
  FlowState field;
  Region region;
};

struct Portrait {
  PortraitConfig config;
  std::vector<FieldSample> field;
  std::vector<Trajectory> trajectories;
};

Portrait phase_portrait(const PortraitConfig& config, const FlowTolerances& tol = {});
void write_field_csv(std::ostream& out, const Portrait& p);
void write_trajectories_csv(std::ostream& out, const Portrait& p);
void write_portrait_svg(std::ostream& out, const Portrait& p);

/// "%.17g"
std::string format_number(double v);

}  // namespace flagvar
