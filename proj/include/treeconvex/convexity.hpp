#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "treeconvex/tree.hpp"
#include "treeconvex/tree_function.hpp"

namespace treeconvex {

inline constexpr double kDefaultCheckTol = 1e-9;
inline constexpr std::size_t kSegmentCheckVertexBudget = 10'000;
inline constexpr std::uint64_t kSubtreeEnumerationBudget = 1'000'000;

// Mean-value operators. Each is evaluated at an interior vertex x of the
// truncated tree; leaves throw TreeError because S(x) is outside the window.
// Weighted means are accumulated in extended precision and rounded once, so
// every operator is monotone in its inputs and maps values <= M to <= M
// exactly in floating point.

/// min{ min_{y != z in S(x)} (u(y)+u(z))/2 ; min_{y in S(x)} (u(x^)+m u(y))/(m+1) }.
/// At the root only the pair term is taken.
double op_convex(const TreeFunction& u, Node x);
double op_convex(const TreeFunction& u, const Vertex& x);

/// min over unordered successor pairs of the pair average.
double op_binary(const TreeFunction& u, Node x);
double op_binary(const TreeFunction& u, const Vertex& x);

/// min over k-element successor subsets of the subset average, 2 <= k <= m.
double op_kconvex(const TreeFunction& u, Node x, unsigned k);
double op_kconvex(const TreeFunction& u, const Vertex& x, unsigned k);

/// Whether k lies in {2, ..., m-2}, the range for which k-convexity was
/// originally posed. Values m-1 and m are supported but flagged.
bool kconvex_in_stated_range(unsigned m, unsigned k);

/// (1/m) sum_{y in S(x)} u(y) - u(x).
double arborescence_laplacian(const TreeFunction& u, Node x);
double arborescence_laplacian(const TreeFunction& u, const Vertex& x);

/// 2/(m+1)^2 u(x^) + (m^2+2m-1)/(m+1)^2 (1/m) sum_{y in S(x)} u(y) - u(x).
/// Requires a non-root interior vertex.
double laplacian_residual(const TreeFunction& u, Node x);
double laplacian_residual(const TreeFunction& u, const Vertex& x);

// Hessian-eigenvalue analogues.

/// C(m,2) pair terms (u(x,i)+u(x,j)-2u(x))/2 for i<j, followed by the m
/// terms (u(x^)+m u(y)-(m+1)u(x))/(m+1). Non-root interior vertices only.
std::vector<double> eigenvalues_convex(const TreeFunction& u, Node x);
/// C(m,2) terms u(x,i)/2 + u(x,j)/2 - u(x), i<j.
std::vector<double> eigenvalues_binary(const TreeFunction& u, Node x);
/// C(m,k) terms (1/k) sum u(x,j_i) - u(x), subsets in lexicographic order.
std::vector<double> eigenvalues_k(const TreeFunction& u, Node x, unsigned k);

// Predicates.

struct Violation {
  Vertex vertex;
  double value;  // u at the vertex
  double bound;  // operator value or interpolation bound it exceeded
};

struct ConvexityVerdict {
  bool holds = true;
  std::vector<Violation> violations;
};

/// u(x) <= op_convex(u, x) + tol at every interior vertex.
ConvexityVerdict is_convex_operator(const TreeFunction& u,
                                    double tol = kDefaultCheckTol);

/// Brute force over every pair x, y and every z strictly inside [x, y]:
/// u(z) <= d(y,z)/d(x,y) u(x) + d(x,z)/d(x,y) u(y) + tol.
/// Throws BudgetExceeded above kSegmentCheckVertexBudget vertices.
ConvexityVerdict is_convex_segment(const TreeFunction& u,
                                   double tol = kDefaultCheckTol);

/// A finite binary subtree rooted at `root`: two successors of the root are
/// members, and every other member has 0 or exactly 2 successors in the set.
struct BinarySubtree {
  Vertex root;
  std::vector<Vertex> members;    // includes root
  std::vector<Vertex> endpoints;  // members without successors in the set

  /// 2^(-(|y| - |root|)) for an endpoint y.
  double weight(const Vertex& endpoint) const;
};

/// Exact number of binary subtrees rooted at an interior vertex with
/// endpoints at most `max_rel_depth` levels below it, saturating at
/// UINT64_MAX.
std::uint64_t count_binary_subtrees(unsigned m, int max_rel_depth);

/// All binary subtrees rooted at x whose endpoints satisfy
/// |y| - |x| <= max_rel_depth, clipped to the truncated tree.
/// Throws BudgetExceeded when the count exceeds `budget`.
std::vector<BinarySubtree> enumerate_binary_subtrees(
    const TruncatedTree& tree, const Vertex& x, int max_rel_depth,
    std::uint64_t budget = kSubtreeEnumerationBudget);

enum class BinaryCheckMode { kOperator, kSubtrees };

/// kOperator: u(x) <= op_binary(u, x) + tol at interior vertices.
/// kSubtrees: u(x) <= sum_{y in E(B)} 2^-(|y|-|x|) u(y) + tol over every
/// enumerated B, with max_rel_depth clipped to depth - |x| (nullopt means
/// full depth).
ConvexityVerdict is_binary_convex(const TreeFunction& u, BinaryCheckMode mode,
                                  std::optional<int> max_rel_depth = std::nullopt,
                                  double tol = kDefaultCheckTol);

// Closed-form reference solutions.

/// u(x) = (m-1)/m sum_{i=0}^{|x|-|x0|} m^-i = 1 - m^-(|x|-|x0|+1) below x0,
/// 0 elsewhere. Computed exactly and rounded once. x0 must not be the root.
TreeFunction reference_convex_indicator(const TruncatedTree& tree,
                                        const Vertex& x0);

/// 1 on the subtree below x0, 0 elsewhere. x0 must not be the root.
TreeFunction reference_binary_indicator(const TruncatedTree& tree,
                                        const Vertex& x0);

}  // namespace treeconvex
