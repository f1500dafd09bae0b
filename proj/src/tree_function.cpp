#include "treeconvex/tree_function.hpp"

#include <cmath>
#include <string>

namespace treeconvex {

TreeFunction::TreeFunction(TruncatedTree tree, double fill)
    : tree_(std::move(tree)), values_(tree_.vertex_count(), fill) {
  if (!std::isfinite(fill)) throw TreeError("tree function values must be finite");
}

TreeFunction::TreeFunction(TruncatedTree tree, std::vector<double> values)
    : tree_(std::move(tree)), values_(std::move(values)) {
  if (values_.size() != tree_.vertex_count()) {
    throw TreeError("expected " + std::to_string(tree_.vertex_count()) +
                    " values, got " + std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw TreeError("non-finite value at vertex " +
                      tree_.vertex(tree_.node(i)).to_string());
    }
  }
}

}  // namespace treeconvex
