#pragma once

#include <filesystem>
#include <string>

#include "twophase/problem.hpp"
#include "twophase/solver.hpp"

namespace twophase {

/// A full experiment description as read from a config file: the problem
/// instance, the grid resolution, the solver schedules, and where outputs go.
struct RunConfig {
  ProblemSpec problem;
  int res_x = 0;
  int res_y = 0;  // 0 for interval domains
  SolverOptions solver;
  std::string output_dir = "out";
};

/// Parses and fully validates a config document (JSON). Unknown keys are
/// rejected at every level; nodal invariants are checked on the declared
/// grid. Throws ParseError on malformed input, ValidationError on invariant
/// breaches.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Inverse of parse_config: load_config(serialize_config(c)) reproduces every
/// field exactly.
std::string serialize_config(const RunConfig& config);

Mesh build_config_mesh(const RunConfig& config);

}  // namespace twophase
