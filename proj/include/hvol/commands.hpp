#pragma once

// Subcommands behind the hvol executable. Each returns the exact bytes to
// emit and the process exit code: 0 success/accepted, 2 domain rejection,
// 1 operational error.

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace hvol {

struct RunConfig {
  std::string subcommand;
  std::string input;
  std::string output;
  std::string format;  // json | csv; empty picks the subcommand default
  std::uint64_t seed = 0;
  std::uint64_t samples = 1'000'000;
  double tol = 1e-8;
  // degenerate
  int k = 6;
  double tau_min = 3.0, tau_max = 12.0;
  int tau_steps = 10;
  double r = 0.5;
  // regularity
  std::vector<double> direction;
  int points = 16;
  // lemmas
  std::vector<double> t_list{3.0, 5.0, 8.0};
  std::vector<double> eps_list{0.05, 0.01};
  std::uint64_t trials = 10000;
};

struct CommandResult {
  int exit_code = 0;
  std::string output;
  std::string diagnostics;  // for stderr
};

CommandResult run_command(const RunConfig& cfg);

CommandResult cmd_simplex(const RunConfig& cfg);
CommandResult cmd_validate(const RunConfig& cfg);
CommandResult cmd_polyhedron(const RunConfig& cfg);
CommandResult cmd_degenerate(const RunConfig& cfg);
CommandResult cmd_regularity(const RunConfig& cfg);
CommandResult cmd_lemmas(const RunConfig& cfg);

struct RegularityRow {
  double s = 0.0;         // ray parameter
  double d = 0.0;         // distance to the boundary point along the ray
  double volume = 0.0;
  double volume_error = 0.0;
  double max_gradient = 0.0;  // max_e |dV/dtheta_e|
  double max_edge = 0.0;
};

struct RegularityProbe {
  double s_star = 0.0;
  std::vector<RegularityRow> rows;
  double slope = 0.0, intercept = 0.0, r_squared = 0.0;  // max edge vs -log d
  double envelope_intercept = 0.0;  // smallest a with max_edge <= a + slope (-log d) on every row
  double holder_exponent = 0.0;     // slope of log|dV| against log|d theta|
  double cauchy_constant = 0.0;     // sup of |dV| / (dtheta (1 + |log dtheta|)) over successive rows
  double contraction = 0.0;         // max |dV_{i+1}| / |dV_i|
  double modulus_drift = 0.0;       // relative change of that ratio over the last step
  double initial_drift = 0.0;       // same over the first step
  bool cauchy_ok = false;  // differences contract and the modulus ratio settles
};

/// Walks toward the ideal boundary along start + s dir at s = s*(1 - 2^-j),
/// j = 1..points. Throws NoBoundaryOnRay.
RegularityProbe regularity_probe(const Eigen::VectorXd& start, const Eigen::VectorXd& direction, int points,
                                 double tol = 1e-8);

}  // namespace hvol
