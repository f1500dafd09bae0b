#pragma once

#include <span>
#include <vector>

#include "treeconvex/tree.hpp"

namespace treeconvex {

/// One real value per vertex of a TruncatedTree, in level-offset layout.
class TreeFunction {
 public:
  explicit TreeFunction(TruncatedTree tree, double fill = 0.0);
  /// Throws TreeError if the length is wrong or any value is not finite.
  TreeFunction(TruncatedTree tree, std::vector<double> values);

  const TruncatedTree& tree() const { return tree_; }

  double operator[](Node n) const { return values_[tree_.id(n)]; }
  double& operator[](Node n) { return values_[tree_.id(n)]; }
  double at(const Vertex& v) const { return values_[tree_.id(v)]; }
  double& at(const Vertex& v) { return values_[tree_.id(v)]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  std::span<const double> level(int k) const {
    return std::span<const double>(values_).subspan(tree_.level_offset(k),
                                                    tree_.level_size(k));
  }
  std::span<double> level(int k) {
    return std::span<double>(values_).subspan(tree_.level_offset(k),
                                              tree_.level_size(k));
  }
  std::span<const double> leaves() const { return level(tree_.depth()); }
  std::span<double> leaves() { return level(tree_.depth()); }

  friend bool operator==(const TreeFunction&, const TreeFunction&) = default;

 private:
  TruncatedTree tree_;
  std::vector<double> values_;
};

}  // namespace treeconvex
