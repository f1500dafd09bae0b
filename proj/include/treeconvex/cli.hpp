#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "treeconvex/boundary.hpp"
#include "treeconvex/solver.hpp"

namespace treeconvex::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kNotConverged = 3,
};

struct RunConfig {
  std::string command;
  unsigned m = 2;
  int depth = 4;
  SolveConfig solve;
  std::string datum = "constant:0";
  SamplingMode sampling;
  std::string input;   // function CSV for check, obstacle CSV for obstacle
  std::vector<int> depths;
  std::optional<int> nonincreasing_from;
  std::string out_csv;
  std::string out_json;
  std::string out_dot;
  std::uint64_t vertex_budget = kDefaultVertexBudget;

  /// Throws std::invalid_argument describing the first bad field.
  void validate() const;
};

/// A builtin family spec (constant:C, affine:A,B, power:P, absdev:C,
/// indicator:LO,HI) or else a path to a t,g CSV.
BoundaryDatum load_datum(const std::string& spec);

/// Parses "4,5,6" or "4..12" (inclusive).
std::vector<int> parse_depths(const std::string& text);

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace treeconvex::cli
