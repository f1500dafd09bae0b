#include "treeconvex/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace treeconvex {

namespace {

using Wide = long double;

void require_interior(const TreeFunction& u, Node x, const char* what) {
  const auto& t = u.tree();
  if (x.level < 0 || x.level > t.depth() || x.index >= t.level_size(x.level)) {
    throw TreeError(std::string(what) + ": vertex outside the truncated tree");
  }
  if (!t.is_interior(x)) {
    throw TreeError(std::string(what) + ": operator undefined at leaf " +
                    t.vertex(x).to_string());
  }
}

void require_non_root(const TreeFunction& u, Node x, const char* what) {
  if (x.level == 0) {
    throw TreeError(std::string(what) + ": the root has no predecessor");
  }
  require_interior(u, x, what);
}

std::span<const double> successors(const TreeFunction& u, Node x) {
  const auto& t = u.tree();
  return u.values().subspan(t.first_child_id(x), t.branching());
}

double predecessor(const TreeFunction& u, Node x) {
  return u.values()[u.tree().parent_id(x)];
}

// Two smallest successor values.
std::pair<double, double> two_smallest(std::span<const double> s) {
  double a = std::numeric_limits<double>::infinity();
  double b = a;
  for (double v : s) {
    if (v < a) {
      b = a;
      a = v;
    } else if (v < b) {
      b = v;
    }
  }
  return {a, b};
}

double pair_term(std::span<const double> s) {
  auto [a, b] = two_smallest(s);
  return static_cast<double>((static_cast<Wide>(a) + b) / 2);
}

double predecessor_term(double up, double y, unsigned m) {
  return static_cast<double>((static_cast<Wide>(up) + static_cast<Wide>(m) * y) /
                             (m + 1));
}

// Calls f(subset) for every k-subset of {0..n-1} in lexicographic order.
template <typename F>
void for_each_subset(unsigned n, unsigned k, F&& f) {
  std::vector<unsigned> idx(k);
  for (unsigned i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    f(std::span<const unsigned>(idx));
    int i = static_cast<int>(k) - 1;
    while (i >= 0 && idx[i] == n - k + static_cast<unsigned>(i)) --i;
    if (i < 0) return;
    ++idx[i];
    for (unsigned j = static_cast<unsigned>(i) + 1; j < k; ++j) {
      idx[j] = idx[j - 1] + 1;
    }
  }
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

int effective_depth(const TruncatedTree& t, int level, int max_rel_depth) {
  return std::min(max_rel_depth, t.depth() - level);
}

// Endpoint-weighted sums sum_{y in E(B)} 2^-(|y|-|x|) u(y), one per binary
// subtree B rooted at x, including the degenerate "x is an endpoint" entry
// when `include_self` is set.
void subtree_sums(const TreeFunction& u, Node x, int rel_depth,
                  bool include_self, std::vector<Wide>& out) {
  const auto& t = u.tree();
  if (include_self) out.push_back(u[x]);
  if (rel_depth < 1 || !t.is_interior(x)) return;
  const unsigned m = t.branching();
  std::vector<std::vector<Wide>> child(m);
  for (unsigned i = 0; i < m; ++i) {
    Node c{x.level + 1, x.index * m + i};
    subtree_sums(u, c, rel_depth - 1, true, child[i]);
  }
  for (unsigned i = 0; i < m; ++i) {
    for (unsigned j = i + 1; j < m; ++j) {
      for (Wide a : child[i]) {
        for (Wide b : child[j]) out.push_back((a + b) / 2);
      }
    }
  }
}

struct Partial {
  std::vector<Vertex> members;
  std::vector<Vertex> endpoints;
};

void enumerate_partials(const TruncatedTree& t, const Vertex& x, int rel_depth,
                        bool include_self, std::vector<Partial>& out) {
  if (include_self) out.push_back({{x}, {x}});
  if (rel_depth < 1 || x.level() >= t.depth()) return;
  const unsigned m = t.branching();
  std::vector<std::vector<Partial>> child(m);
  for (unsigned i = 0; i < m; ++i) {
    enumerate_partials(t, x.child(i), rel_depth - 1, true, child[i]);
  }
  for (unsigned i = 0; i < m; ++i) {
    for (unsigned j = i + 1; j < m; ++j) {
      for (const auto& a : child[i]) {
        for (const auto& b : child[j]) {
          Partial p;
          p.members.reserve(1 + a.members.size() + b.members.size());
          p.members.push_back(x);
          p.members.insert(p.members.end(), a.members.begin(), a.members.end());
          p.members.insert(p.members.end(), b.members.begin(), b.members.end());
          p.endpoints = a.endpoints;
          p.endpoints.insert(p.endpoints.end(), b.endpoints.begin(),
                             b.endpoints.end());
          out.push_back(std::move(p));
        }
      }
    }
  }
}

}  // namespace

double op_binary(const TreeFunction& u, Node x) {
  require_interior(u, x, "op_binary");
  return pair_term(successors(u, x));
}

double op_convex(const TreeFunction& u, Node x) {
  require_interior(u, x, "op_convex");
  const auto s = successors(u, x);
  const double pair = pair_term(s);
  if (x.level == 0) return pair;
  const double lowest = *std::min_element(s.begin(), s.end());
  return std::min(pair, predecessor_term(predecessor(u, x), lowest,
                                         u.tree().branching()));
}

double op_kconvex(const TreeFunction& u, Node x, unsigned k) {
  const unsigned m = u.tree().branching();
  if (k < 2 || k > m) {
    throw TreeError("k=" + std::to_string(k) + " outside [2, m] for m=" +
                    std::to_string(m));
  }
  require_interior(u, x, "op_kconvex");
  // The smallest k-subset mean is the mean of the k smallest values.
  const auto s = successors(u, x);
  std::vector<double> v(s.begin(), s.end());
  std::partial_sort(v.begin(), v.begin() + k, v.end());
  Wide sum = 0;
  for (unsigned i = 0; i < k; ++i) sum += v[i];
  return static_cast<double>(sum / k);
}

bool kconvex_in_stated_range(unsigned m, unsigned k) {
  return k >= 2 && k + 2 <= m;
}

double arborescence_laplacian(const TreeFunction& u, Node x) {
  require_interior(u, x, "arborescence_laplacian");
  Wide sum = 0;
  for (double v : successors(u, x)) sum += v;
  return static_cast<double>(sum / u.tree().branching() - u[x]);
}

double laplacian_residual(const TreeFunction& u, Node x) {
  require_non_root(u, x, "laplacian_residual");
  const Wide m = u.tree().branching();
  Wide sum = 0;
  for (double v : successors(u, x)) sum += v;
  const Wide mp1sq = (m + 1) * (m + 1);
  return static_cast<double>(2 * static_cast<Wide>(predecessor(u, x)) / mp1sq +
                             (m * m + 2 * m - 1) / mp1sq * (sum / m) - u[x]);
}

std::vector<double> eigenvalues_convex(const TreeFunction& u, Node x) {
  require_non_root(u, x, "eigenvalues_convex");
  const auto s = successors(u, x);
  const unsigned m = u.tree().branching();
  const double ux = u[x];
  std::vector<double> out;
  out.reserve(m * (m - 1) / 2 + m);
  for (unsigned i = 0; i < m; ++i) {
    for (unsigned j = i + 1; j < m; ++j) out.push_back((s[i] + s[j] - 2 * ux) / 2);
  }
  const double up = predecessor(u, x);
  for (double y : s) out.push_back((up + m * y - (m + 1) * ux) / (m + 1));
  return out;
}

std::vector<double> eigenvalues_binary(const TreeFunction& u, Node x) {
  require_interior(u, x, "eigenvalues_binary");
  const auto s = successors(u, x);
  const unsigned m = u.tree().branching();
  const double ux = u[x];
  std::vector<double> out;
  for (unsigned i = 0; i < m; ++i) {
    for (unsigned j = i + 1; j < m; ++j) out.push_back(0.5 * s[i] + 0.5 * s[j] - ux);
  }
  return out;
}

std::vector<double> eigenvalues_k(const TreeFunction& u, Node x, unsigned k) {
  const unsigned m = u.tree().branching();
  if (k < 2 || k > m) {
    throw TreeError("k=" + std::to_string(k) + " outside [2, m] for m=" +
                    std::to_string(m));
  }
  require_interior(u, x, "eigenvalues_k");
  const auto s = successors(u, x);
  const double ux = u[x];
  std::vector<double> out;
  for_each_subset(m, k, [&](std::span<const unsigned> idx) {
    double sum = 0;
    for (unsigned i : idx) sum += s[i];
    out.push_back(sum / k - ux);
  });
  return out;
}

double op_convex(const TreeFunction& u, const Vertex& x) {
  return op_convex(u, u.tree().node_of(x));
}
double op_binary(const TreeFunction& u, const Vertex& x) {
  return op_binary(u, u.tree().node_of(x));
}
double op_kconvex(const TreeFunction& u, const Vertex& x, unsigned k) {
  return op_kconvex(u, u.tree().node_of(x), k);
}
double arborescence_laplacian(const TreeFunction& u, const Vertex& x) {
  return arborescence_laplacian(u, u.tree().node_of(x));
}
double laplacian_residual(const TreeFunction& u, const Vertex& x) {
  return laplacian_residual(u, u.tree().node_of(x));
}

ConvexityVerdict is_convex_operator(const TreeFunction& u, double tol) {
  const auto& t = u.tree();
  ConvexityVerdict verdict;
  for (std::size_t id = 0; id < t.interior_count(); ++id) {
    const Node x = t.node(id);
    const double bound = op_convex(u, x);
    if (u[x] > bound + tol) {
      verdict.holds = false;
      verdict.violations.push_back({t.vertex(x), u[x], bound});
    }
  }
  return verdict;
}

ConvexityVerdict is_convex_segment(const TreeFunction& u, double tol) {
  const auto& t = u.tree();
  if (t.vertex_count() > kSegmentCheckVertexBudget) {
    throw BudgetExceeded("segment check refuses trees with more than " +
                         std::to_string(kSegmentCheckVertexBudget) +
                         " vertices (got " + std::to_string(t.vertex_count()) +
                         ")");
  }
  std::vector<Vertex> all;
  all.reserve(t.vertex_count());
  for (std::size_t id = 0; id < t.vertex_count(); ++id) all.push_back(t.vertex(t.node(id)));

  std::vector<bool> flagged(t.vertex_count(), false);
  ConvexityVerdict verdict;
  for (std::size_t a = 0; a < all.size(); ++a) {
    for (std::size_t b = a + 1; b < all.size(); ++b) {
      const auto path = minimal_path(all[a], all[b]);
      if (path.size() < 3) continue;
      // Cumulative length from x = path.front() along the path.
      std::vector<Rational> cum(path.size());
      for (std::size_t i = 1; i < path.size(); ++i) {
        const int edge_level = std::max(path[i - 1].level(), path[i].level());
        cum[i] = cum[i - 1] + edge_length(t.branching(), edge_level);
      }
      const Rational total = cum.back();
      const double ux = u.at(path.front());
      const double uy = u.at(path.back());
      for (std::size_t i = 1; i + 1 < path.size(); ++i) {
        const double wy = (cum[i] / total).to_double();
        const double wx = ((total - cum[i]) / total).to_double();
        const double bound = wx * ux + wy * uy;
        const std::size_t zid = t.id(path[i]);
        if (u.values()[zid] > bound + tol) {
          verdict.holds = false;
          if (!flagged[zid]) {
            flagged[zid] = true;
            verdict.violations.push_back({path[i], u.values()[zid], bound});
          }
        }
      }
    }
  }
  return verdict;
}

double BinarySubtree::weight(const Vertex& endpoint) const {
  return std::ldexp(1.0, -(endpoint.level() - root.level()));
}

std::uint64_t count_binary_subtrees(unsigned m, int max_rel_depth) {
  const std::uint64_t pairs = std::uint64_t{m} * (m - 1) / 2;
  std::uint64_t count = 0;
  for (int d = 1; d <= max_rel_depth; ++d) {
    const std::uint64_t per_child =
        count == std::numeric_limits<std::uint64_t>::max() ? count : count + 1;
    count = saturating_mul(pairs, saturating_mul(per_child, per_child));
  }
  return count;
}

std::vector<BinarySubtree> enumerate_binary_subtrees(const TruncatedTree& tree,
                                                     const Vertex& x,
                                                     int max_rel_depth,
                                                     std::uint64_t budget) {
  tree.node_of(x);
  const int depth = effective_depth(tree, x.level(), max_rel_depth);
  const std::uint64_t count = count_binary_subtrees(tree.branching(), depth);
  if (count > budget) {
    throw BudgetExceeded("binary subtree enumeration at " + x.to_string() +
                         " would produce " + std::to_string(count) +
                         " subtrees, above the budget of " +
                         std::to_string(budget));
  }
  std::vector<Partial> partials;
  enumerate_partials(tree, x, depth, false, partials);
  std::vector<BinarySubtree> out;
  out.reserve(partials.size());
  for (auto& p : partials) {
    out.push_back({x, std::move(p.members), std::move(p.endpoints)});
  }
  return out;
}

ConvexityVerdict is_binary_convex(const TreeFunction& u, BinaryCheckMode mode,
                                  std::optional<int> max_rel_depth, double tol) {
  const auto& t = u.tree();
  ConvexityVerdict verdict;
  for (std::size_t id = 0; id < t.interior_count(); ++id) {
    const Node x = t.node(id);
    double bound = 0;
    if (mode == BinaryCheckMode::kOperator) {
      bound = op_binary(u, x);
    } else {
      const int depth =
          effective_depth(t, x.level, max_rel_depth.value_or(t.depth()));
      const std::uint64_t count = count_binary_subtrees(t.branching(), depth);
      if (count > kSubtreeEnumerationBudget) {
        throw BudgetExceeded("binary subtree check at " +
                             t.vertex(x).to_string() + " needs " +
                             std::to_string(count) + " subtrees, above the budget of " +
                             std::to_string(kSubtreeEnumerationBudget));
      }
      std::vector<Wide> sums;
      subtree_sums(u, x, depth, false, sums);
      bound = static_cast<double>(*std::min_element(sums.begin(), sums.end()));
    }
    if (u[x] > bound + tol) {
      verdict.holds = false;
      verdict.violations.push_back({t.vertex(x), u[x], bound});
    }
  }
  return verdict;
}

TreeFunction reference_convex_indicator(const TruncatedTree& tree,
                                        const Vertex& x0) {
  if (x0.is_root()) throw TreeError("reference_convex_indicator: x0 must not be the root");
  tree.node_of(x0);
  TreeFunction u(tree, 0.0);
  const unsigned m = tree.branching();
  for (int level = x0.level(); level <= tree.depth(); ++level) {
    const Rational value = Rational(1) - edge_length(m, level - x0.level() + 1);
    const std::uint64_t span = checked_pow(m, level - x0.level());
    const std::uint64_t first = x0.index() * span;
    auto block = u.level(level);
    std::fill(block.begin() + first, block.begin() + first + span, value.to_double());
  }
  return u;
}

TreeFunction reference_binary_indicator(const TruncatedTree& tree,
                                        const Vertex& x0) {
  if (x0.is_root()) throw TreeError("reference_binary_indicator: x0 must not be the root");
  tree.node_of(x0);
  TreeFunction u(tree, 0.0);
  const unsigned m = tree.branching();
  for (int level = x0.level(); level <= tree.depth(); ++level) {
    const std::uint64_t span = checked_pow(m, level - x0.level());
    const std::uint64_t first = x0.index() * span;
    auto block = u.level(level);
    std::fill(block.begin() + first, block.begin() + first + span, 1.0);
  }
  return u;
}

}  // namespace treeconvex
