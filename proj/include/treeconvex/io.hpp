#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "treeconvex/tree_function.hpp"

namespace treeconvex {

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

/// CSV with header "vertex,level,index,psi,value", one row per vertex in
/// level-offset order. An optional mask adds a trailing "coincidence" column
/// (true/false).
void write_function_csv(std::ostream& os, const TreeFunction& u,
                        const std::vector<bool>* coincidence = nullptr);

/// Reads a CSV with at least "vertex" and "value" columns covering every
/// vertex of `tree` exactly once. "level"/"index" columns, when present, must
/// agree with the vertex. Throws FunctionFormatError naming the row.
TreeFunction read_function_csv(std::istream& is, const TruncatedTree& tree);

class FunctionFormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Graphviz digraph of the tree, each node labelled with vertex and value.
void write_dot(std::ostream& os, const TreeFunction& u);

}  // namespace treeconvex
