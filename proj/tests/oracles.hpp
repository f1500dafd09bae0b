#pragma once

// Test-only reference implementations. Nothing here calls into the code path
// it is used to check: paths are found by graph search over an explicit
// adjacency list, operators by exhaustive enumeration in plain double
// arithmetic, harmonic values by direct leaf averaging.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <random>
#include <vector>

#include "treeconvex/rational.hpp"
#include "treeconvex/tree.hpp"
#include "treeconvex/tree_function.hpp"

namespace oracle {

using treeconvex::Node;
using treeconvex::Rational;
using treeconvex::TreeFunction;
using treeconvex::TruncatedTree;

/// Explicit undirected adjacency of a truncated tree, by vertex id.
struct Graph {
  std::vector<std::vector<std::size_t>> adj;
  std::vector<int> level;
};

inline Graph build_graph(const TruncatedTree& t) {
  Graph g;
  g.adj.resize(t.vertex_count());
  g.level.resize(t.vertex_count());
  // Enumerate vertices by explicit digit strings, independent of id helpers.
  std::vector<std::vector<unsigned>> digits{{}};
  std::size_t next = 1;
  g.level[0] = 0;
  for (std::size_t id = 0; id < digits.size(); ++id) {
    if (static_cast<int>(digits[id].size()) == t.depth()) continue;
    for (unsigned i = 0; i < t.branching(); ++i) {
      auto d = digits[id];
      d.push_back(i);
      digits.push_back(d);
      g.level[next] = static_cast<int>(d.size());
      g.adj[id].push_back(next);
      g.adj[next].push_back(id);
      ++next;
    }
  }
  return g;
}

/// BFS shortest path between ids a and b (unique in a tree).
inline std::vector<std::size_t> bfs_path(const Graph& g, std::size_t a, std::size_t b) {
  std::vector<std::size_t> prev(g.adj.size(), std::numeric_limits<std::size_t>::max());
  std::queue<std::size_t> q;
  q.push(a);
  prev[a] = a;
  while (!q.empty()) {
    auto v = q.front();
    q.pop();
    for (auto w : g.adj[v]) {
      if (prev[w] == std::numeric_limits<std::size_t>::max()) {
        prev[w] = v;
        q.push(w);
      }
    }
  }
  std::vector<std::size_t> path{b};
  while (path.back() != a) path.push_back(prev[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

/// Sum of edge lengths m^-(deeper endpoint level) along the BFS path.
inline Rational path_length(const Graph& g, unsigned m, const std::vector<std::size_t>& path) {
  Rational len{0};
  for (std::size_t i = 1; i < path.size(); ++i) {
    const int k = std::max(g.level[path[i - 1]], g.level[path[i]]);
    std::int64_t den = 1;
    for (int j = 0; j < k; ++j) den *= m;
    len += Rational(1, den);
  }
  return len;
}

inline std::vector<double> successor_values(const TreeFunction& u, Node x) {
  std::vector<double> s;
  const unsigned m = u.tree().branching();
  for (unsigned i = 0; i < m; ++i) s.push_back(u[Node{x.level + 1, x.index * m + i}]);
  return s;
}

/// Exhaustive min over all pairs and all successors.
inline double op_convex(const TreeFunction& u, Node x) {
  const auto s = successor_values(u, x);
  const unsigned m = u.tree().branching();
  double best = std::numeric_limits<double>::infinity();
  for (unsigned i = 0; i < m; ++i) {
    for (unsigned j = 0; j < m; ++j) {
      if (i != j) best = std::min(best, (s[i] + s[j]) / 2);
    }
  }
  if (x.level > 0) {
    const double up = u[Node{x.level - 1, x.index / m}];
    for (double y : s) best = std::min(best, (up + m * y) / (m + 1));
  }
  return best;
}

inline double op_binary(const TreeFunction& u, Node x) {
  const auto s = successor_values(u, x);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) best = std::min(best, (s[i] + s[j]) / 2);
  }
  return best;
}

/// Min over all k-subsets via bitmask enumeration.
inline double op_kconvex(const TreeFunction& u, Node x, unsigned k) {
  const auto s = successor_values(u, x);
  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << s.size()); ++mask) {
    if (static_cast<unsigned>(__builtin_popcount(mask)) != k) continue;
    double sum = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (mask & (1u << i)) sum += s[i];
    }
    best = std::min(best, sum / k);
  }
  return best;
}

/// Average of the leaf values below x: the leaves of x form the contiguous
/// index block [index * span, (index + 1) * span) of the last level.
inline double subtree_leaf_average(const TreeFunction& u, Node x) {
  const auto& t = u.tree();
  std::uint64_t span = 1;
  for (int i = x.level; i < t.depth(); ++i) span *= t.branching();
  const auto leaves = u.leaves();
  long double sum = 0;
  for (std::uint64_t i = x.index * span; i < (x.index + 1) * span; ++i) sum += leaves[i];
  return static_cast<double>(sum / static_cast<long double>(span));
}

/// Number of "endpoint or binary subtree" choices at a vertex of a binary
/// (m = 2) tree with d levels available: c(d) = 1 + c(d-1)^2, c(0) = 1.
inline std::uint64_t binary_choice_count(int d) {
  std::uint64_t c = 1;
  for (int i = 1; i <= d; ++i) c = 1 + c * c;
  return c;
}

inline std::vector<double> random_values(std::mt19937_64& rng, std::size_t n,
                                         double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

}  // namespace oracle
