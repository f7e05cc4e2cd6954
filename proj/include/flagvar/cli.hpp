#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "flagvar/flag.hpp"
#include "flagvar/ricciflow.hpp"

namespace flagvar::cli {

enum ExitCode { Success = 0, AssertionFailure = 1, UsageError = 2, IoError = 3 };

/// "cp" (C_{n+1} with the twistor Theta), "su3-maxflag", or "custom".
struct SpaceSpec {
  std::string kind = "cp";
  int n = 0;  // 0 selects the command default
  std::string family = "C";
  int rank = 2;
  std::vector<int> theta;  // 1-based simple root positions

  bool operator==(const SpaceSpec&) const = default;
};

struct RunConfig {
  std::string command;
  std::string name;  // reproduce target
  SpaceSpec space;
  std::vector<double> lambda;  // empty means the normal metric
  std::string vector;          // "A11,0.5*S12+"; empty means the space default
  std::string alpha;           // root label; empty means the space default
  std::optional<double> b;
  std::optional<double> k;
  std::optional<double> xi;
  int mesh = 24;
  double lo = 1.0;
  double hi = 8.0;
  double t_end = 10.0;
  double x = 1.0;
  double y = 1.0;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.1;
  int grid_x = 20;
  int grid_y = 20;
  std::vector<FlowState> traj;
  std::string format = "json";
  std::string output;  // empty means stdout
  std::string svg;

  bool operator==(const RunConfig& other) const;
};

using KeyValues = std::map<std::string, std::string>;

/// key=value lines, sorted by key; optional fields are omitted when unset.
std::string emit(const RunConfig& config);
/// Reads key=value lines; '#' starts a comment. Throws a usage error on an
/// unknown key or a malformed value.
KeyValues parse_key_values(const std::string& text);
RunConfig parse_config(const std::string& text);
/// Applies entries on top of `base`.
RunConfig apply(RunConfig base, const KeyValues& entries);

FlagPtr build_space(const SpaceSpec& spec);
/// "A11,0.5*S12+,-IH12" as a combination of basis elements.
LieElement parse_vector(const FlagSpace& flag, const std::string& text);

/// Dispatches on config.command; reports go to `out`, diagnostics to `err`.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);
/// Full entry point, including argument parsing.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace flagvar::cli
