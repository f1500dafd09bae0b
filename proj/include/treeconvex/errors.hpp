#pragma once

#include <stdexcept>

namespace treeconvex {

/// Raised for contract violations: invalid vertices, mismatched branching
/// factors, operators evaluated where they are undefined.
class TreeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a size guard (vertex count, subtree count, leaf budget) is hit.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace treeconvex
