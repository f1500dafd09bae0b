#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "treeconvex/tree.hpp"
#include "treeconvex/tree_function.hpp"

namespace treeconvex {

enum class Variant {
  kConvex,
  kBinary,
  kKConvex,
  kLaplacianFull,
  kLaplacianArborescence,
};

enum class Sweep {
  kJacobi,
  kGaussSeidel,  // in place, levels L-1 down to 0
};

/// CLI spelling: convex, binary, kconvex, laplacian-full, laplacian-arb.
std::string_view to_string(Variant v);
Variant parse_variant(std::string_view text);
std::string_view to_string(Sweep s);
Sweep parse_sweep(std::string_view text);

bool is_envelope(Variant v);
bool is_laplacian(Variant v);

struct SolveConfig {
  Variant variant = Variant::kConvex;
  unsigned k = 2;  // used by kKConvex only
  double tol = 1e-12;
  std::int64_t max_iter = 1'000'000;
  Sweep sweep = Sweep::kJacobi;
  unsigned workers = 1;  // Jacobi threads; results do not depend on it

  /// Throws TreeError on tol <= 0, max_iter < 1, workers < 1, or k outside
  /// [2, m] for the kconvex variant.
  void validate(unsigned m) const;
};

struct SolveReport {
  TreeFunction solution;
  std::int64_t iterations = 0;
  double final_residual = 0;
  bool converged = false;
  /// Every iterate was pointwise <= the previous one.
  bool monotone = true;
};

struct ObstacleResult {
  TreeFunction envelope;
  std::vector<bool> coincidence_mask;  // indexed by vertex id
  SolveReport report;

  std::size_t coincidence_count() const;
};

/// One application of the variant's update rule at interior vertex x.
/// Envelope variants use the successor-pair term alone at the root;
/// laplacian-full uses the arborescence rule at the root.
double apply_operator(const TreeFunction& u, Node x, Variant variant,
                      unsigned k = 2);

/// Sup-norm defect max_x |u(x) - T(u)(x)| over interior vertices.
double residual(const TreeFunction& u, Variant variant, unsigned k = 2);

/// Largest fixed point of an envelope equation with the given leaf values,
/// by monotone iteration from max(leaf_values). Leaves stay clamped.
SolveReport solve_dirichlet(const TruncatedTree& tree,
                            std::span<const double> leaf_values,
                            const SolveConfig& cfg);
SolveReport solve_dirichlet(const TreeFunction& leaf_data, const SolveConfig& cfg);

/// Exact fixed point of the truncated binary system in one reverse-level pass.
TreeFunction binary_envelope_exact(const TruncatedTree& tree,
                                   std::span<const double> leaf_values);

/// Largest function below `obstacle` satisfying the variant's operator
/// inequality, via u <- min(obstacle, T(u)) from u = obstacle. Leaves are
/// clamped to the obstacle.
ObstacleResult solve_obstacle(const TreeFunction& obstacle, const SolveConfig& cfg);

/// Jacobi/Gauss-Seidel iteration of a linear mean-value identity.
SolveReport solve_laplacian(const TruncatedTree& tree,
                            std::span<const double> leaf_values,
                            const SolveConfig& cfg);
SolveReport solve_laplacian(const TreeFunction& leaf_data, const SolveConfig& cfg);

/// Dispatches on cfg.variant to solve_dirichlet or solve_laplacian.
SolveReport solve(const TruncatedTree& tree, std::span<const double> leaf_values,
                  const SolveConfig& cfg);

}  // namespace treeconvex
