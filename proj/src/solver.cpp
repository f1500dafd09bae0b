#include "treeconvex/solver.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "treeconvex/convexity.hpp"

namespace treeconvex {

namespace {

using Wide = long double;

std::span<const double> successors(const TreeFunction& u, Node x) {
  return u.values().subspan(u.tree().first_child_id(x), u.tree().branching());
}

double arborescence_update(const TreeFunction& u, Node x) {
  Wide sum = 0;
  for (double v : successors(u, x)) sum += v;
  return static_cast<double>(sum / u.tree().branching());
}

double laplacian_full_update(const TreeFunction& u, Node x) {
  if (x.level == 0) return arborescence_update(u, x);
  const Wide m = u.tree().branching();
  Wide sum = 0;
  for (double v : successors(u, x)) sum += v;
  const Wide up = u.values()[u.tree().parent_id(x)];
  return static_cast<double>((2 * m * up + (m * m + 2 * m - 1) * sum) /
                             (m * (m + 1) * (m + 1)));
}

std::vector<Node> interior_nodes(const TruncatedTree& t) {
  std::vector<Node> nodes;
  nodes.reserve(t.interior_count());
  for (int level = 0; level < t.depth(); ++level) {
    for (std::uint64_t i = 0; i < t.level_size(level); ++i) nodes.push_back({level, i});
  }
  return nodes;
}

struct SweepStats {
  double change = 0;
  bool monotone = true;
};

// Monotone fixed-point iteration shared by every solve. `update(u, x)` is the
// new value at interior vertex x given the current iterate u; `defect(u)` is
// the sup-norm equation residual used by the stopping rule.
template <typename Update, typename Defect>
SolveReport iterate(TreeFunction u, const SolveConfig& cfg, Update update,
                    Defect defect) {
  const TruncatedTree& t = u.tree();
  const std::vector<Node> nodes = interior_nodes(t);
  SolveReport report{u};
  report.monotone = true;

  TreeFunction next = u;
  const unsigned workers =
      std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(nodes.size())));

  auto jacobi_range = [&](std::size_t lo, std::size_t hi, SweepStats& stats) {
    for (std::size_t i = lo; i < hi; ++i) {
      const Node x = nodes[i];
      const double old = u[x];
      const double fresh = update(u, x);
      next[x] = fresh;
      stats.change = std::max(stats.change, std::abs(fresh - old));
      if (fresh > old) stats.monotone = false;
    }
  };

  for (std::int64_t iter = 1; iter <= cfg.max_iter; ++iter) {
    SweepStats sweep;
    if (cfg.sweep == Sweep::kGaussSeidel) {
      // Vertices within one level never read each other, so level order from
      // the leaves upward is the whole ordering contract.
      for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
        const double old = u[*it];
        const double fresh = update(u, *it);
        u[*it] = fresh;
        sweep.change = std::max(sweep.change, std::abs(fresh - old));
        if (fresh > old) sweep.monotone = false;
      }
    } else if (workers == 1) {
      jacobi_range(0, nodes.size(), sweep);
      std::swap(u, next);
    } else {
      std::vector<SweepStats> partial(workers);
      std::vector<std::jthread> pool;
      const std::size_t chunk = (nodes.size() + workers - 1) / workers;
      for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = std::min(nodes.size(), w * chunk);
        const std::size_t hi = std::min(nodes.size(), lo + chunk);
        pool.emplace_back([&, lo, hi, w] { jacobi_range(lo, hi, partial[w]); });
      }
      pool.clear();
      for (const auto& p : partial) {
        sweep.change = std::max(sweep.change, p.change);
        sweep.monotone = sweep.monotone && p.monotone;
      }
      std::swap(u, next);
    }
    report.iterations = iter;
    report.monotone = report.monotone && sweep.monotone;
    if (sweep.change <= cfg.tol) {
      const double res = defect(u);
      if (res <= cfg.tol) {
        report.converged = true;
        break;
      }
    }
  }
  report.final_residual = defect(u);
  report.solution = std::move(u);
  return report;
}

TreeFunction initial_iterate(const TruncatedTree& tree,
                             std::span<const double> leaf_values) {
  if (leaf_values.size() != tree.leaf_count()) {
    throw TreeError("expected " + std::to_string(tree.leaf_count()) +
                    " leaf values, got " + std::to_string(leaf_values.size()));
  }
  for (double v : leaf_values) {
    if (!std::isfinite(v)) throw TreeError("leaf values must be finite");
  }
  const double top = *std::max_element(leaf_values.begin(), leaf_values.end());
  TreeFunction u(tree, top);
  std::copy(leaf_values.begin(), leaf_values.end(), u.leaves().begin());
  return u;
}

}  // namespace

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::kConvex: return "convex";
    case Variant::kBinary: return "binary";
    case Variant::kKConvex: return "kconvex";
    case Variant::kLaplacianFull: return "laplacian-full";
    case Variant::kLaplacianArborescence: return "laplacian-arb";
  }
  return "?";
}

Variant parse_variant(std::string_view text) {
  for (Variant v : {Variant::kConvex, Variant::kBinary, Variant::kKConvex,
                    Variant::kLaplacianFull, Variant::kLaplacianArborescence}) {
    if (to_string(v) == text) return v;
  }
  throw TreeError("unknown variant '" + std::string(text) + "'");
}

std::string_view to_string(Sweep s) {
  return s == Sweep::kJacobi ? "jacobi" : "gs";
}

Sweep parse_sweep(std::string_view text) {
  if (text == "jacobi") return Sweep::kJacobi;
  if (text == "gs") return Sweep::kGaussSeidel;
  throw TreeError("unknown sweep '" + std::string(text) + "'");
}

bool is_envelope(Variant v) {
  return v == Variant::kConvex || v == Variant::kBinary || v == Variant::kKConvex;
}

bool is_laplacian(Variant v) { return !is_envelope(v); }

void SolveConfig::validate(unsigned m) const {
  if (!(tol > 0)) throw TreeError("tol must be positive");
  if (max_iter < 1) throw TreeError("max_iter must be at least 1");
  if (workers < 1) throw TreeError("workers must be at least 1");
  if (variant == Variant::kKConvex && (k < 2 || k > m)) {
    throw TreeError("k=" + std::to_string(k) + " outside [2, m] for m=" +
                    std::to_string(m));
  }
}

std::size_t ObstacleResult::coincidence_count() const {
  return static_cast<std::size_t>(
      std::count(coincidence_mask.begin(), coincidence_mask.end(), true));
}

double apply_operator(const TreeFunction& u, Node x, Variant variant, unsigned k) {
  switch (variant) {
    case Variant::kConvex: return op_convex(u, x);
    case Variant::kBinary: return op_binary(u, x);
    case Variant::kKConvex: return op_kconvex(u, x, k);
    case Variant::kLaplacianFull: return laplacian_full_update(u, x);
    case Variant::kLaplacianArborescence: return arborescence_update(u, x);
  }
  throw TreeError("unknown variant");
}

double residual(const TreeFunction& u, Variant variant, unsigned k) {
  const auto& t = u.tree();
  double worst = 0;
  for (int level = 0; level < t.depth(); ++level) {
    for (std::uint64_t i = 0; i < t.level_size(level); ++i) {
      const Node x{level, i};
      worst = std::max(worst, std::abs(u[x] - apply_operator(u, x, variant, k)));
    }
  }
  return worst;
}

SolveReport solve_dirichlet(const TruncatedTree& tree,
                            std::span<const double> leaf_values,
                            const SolveConfig& cfg) {
  cfg.validate(tree.branching());
  if (!is_envelope(cfg.variant)) {
    throw TreeError("solve_dirichlet needs an envelope variant, got " +
                    std::string(to_string(cfg.variant)));
  }
  const Variant variant = cfg.variant;
  const unsigned k = cfg.k;
  return iterate(
      initial_iterate(tree, leaf_values), cfg,
      [variant, k](const TreeFunction& u, Node x) {
        return apply_operator(u, x, variant, k);
      },
      [variant, k](const TreeFunction& u) { return residual(u, variant, k); });
}

SolveReport solve_dirichlet(const TreeFunction& leaf_data, const SolveConfig& cfg) {
  return solve_dirichlet(leaf_data.tree(), leaf_data.leaves(), cfg);
}

TreeFunction binary_envelope_exact(const TruncatedTree& tree,
                                   std::span<const double> leaf_values) {
  TreeFunction u = initial_iterate(tree, leaf_values);
  for (int level = tree.depth() - 1; level >= 0; --level) {
    for (std::uint64_t i = 0; i < tree.level_size(level); ++i) {
      u[Node{level, i}] = op_binary(u, Node{level, i});
    }
  }
  return u;
}

ObstacleResult solve_obstacle(const TreeFunction& obstacle, const SolveConfig& cfg) {
  const TruncatedTree& tree = obstacle.tree();
  cfg.validate(tree.branching());
  if (!is_envelope(cfg.variant)) {
    throw TreeError("solve_obstacle needs an envelope variant, got " +
                    std::string(to_string(cfg.variant)));
  }
  const Variant variant = cfg.variant;
  const unsigned k = cfg.k;
  auto update = [&obstacle, variant, k](const TreeFunction& u, Node x) {
    return std::min(obstacle[x], apply_operator(u, x, variant, k));
  };
  auto defect = [&](const TreeFunction& u) {
    double worst = 0;
    for (int level = 0; level < tree.depth(); ++level) {
      for (std::uint64_t i = 0; i < tree.level_size(level); ++i) {
        const Node x{level, i};
        worst = std::max(worst, std::abs(u[x] - update(u, x)));
      }
    }
    return worst;
  };
  SolveReport report = iterate(obstacle, cfg, update, defect);

  std::vector<bool> mask(tree.vertex_count());
  const auto env = report.solution.values();
  const auto f = obstacle.values();
  for (std::size_t id = 0; id < mask.size(); ++id) {
    mask[id] = std::abs(env[id] - f[id]) <= cfg.tol;
  }
  TreeFunction envelope = report.solution;
  return {std::move(envelope), std::move(mask), std::move(report)};
}

SolveReport solve_laplacian(const TruncatedTree& tree,
                            std::span<const double> leaf_values,
                            const SolveConfig& cfg) {
  cfg.validate(tree.branching());
  if (!is_laplacian(cfg.variant)) {
    throw TreeError("solve_laplacian needs a laplacian variant, got " +
                    std::string(to_string(cfg.variant)));
  }
  const Variant variant = cfg.variant;
  return iterate(
      initial_iterate(tree, leaf_values), cfg,
      [variant](const TreeFunction& u, Node x) {
        return apply_operator(u, x, variant);
      },
      [variant](const TreeFunction& u) { return residual(u, variant); });
}

SolveReport solve_laplacian(const TreeFunction& leaf_data, const SolveConfig& cfg) {
  return solve_laplacian(leaf_data.tree(), leaf_data.leaves(), cfg);
}

SolveReport solve(const TruncatedTree& tree, std::span<const double> leaf_values,
                  const SolveConfig& cfg) {
  return is_envelope(cfg.variant) ? solve_dirichlet(tree, leaf_values, cfg)
                                  : solve_laplacian(tree, leaf_values, cfg);
}

}  // namespace treeconvex
