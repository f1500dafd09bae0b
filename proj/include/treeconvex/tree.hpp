#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "treeconvex/errors.hpp"
#include "treeconvex/rational.hpp"

namespace treeconvex {

/// A vertex of the regular m-branching tree, addressed by its digit
/// sequence. The empty sequence is the root. Level and within-level index
/// are derived: index = sum digits[i] * m^(level-1-i).
class Vertex {
 public:
  Vertex(unsigned m, std::vector<unsigned> digits);

  static Vertex root(unsigned m) { return Vertex(m, {}); }
  static Vertex from_index(unsigned m, int level, std::uint64_t index);
  /// Parses "root" or dot-joined digits such as "1.0.2".
  static Vertex parse(unsigned m, std::string_view text);

  unsigned branching() const { return m_; }
  int level() const { return static_cast<int>(digits_.size()); }
  std::uint64_t index() const { return index_; }
  std::span<const unsigned> digits() const { return digits_; }
  bool is_root() const { return digits_.empty(); }

  Vertex parent() const;
  Vertex child(unsigned i) const;
  std::string to_string() const;

  friend bool operator==(const Vertex& a, const Vertex& b) {
    return a.m_ == b.m_ && a.digits_ == b.digits_;
  }

 private:
  unsigned m_;
  std::vector<unsigned> digits_;
  std::uint64_t index_ = 0;
};

/// psi(v) = sum a_i / m^i, exactly.
Rational psi(const Vertex& v);

/// Length of the level-k edge, m^(-k).
Rational edge_length(unsigned m, int level);

/// Deepest common ancestor (longest common digit prefix).
Vertex common_ancestor(const Vertex& x, const Vertex& y);

/// Length of the minimal path between x and y.
Rational distance(const Vertex& x, const Vertex& y);

/// The unique minimal path x -> ... -> w -> ... -> y through the deepest
/// common ancestor w.
std::vector<Vertex> minimal_path(const Vertex& x, const Vertex& y);

struct DyadicInterval {
  Rational lo;
  Rational hi;
};

/// I_v = [psi(v), psi(v) + m^(-|v|)].
DyadicInterval interval(const Vertex& v);

/// True iff the digits of x0 are a prefix of the digits of v.
bool is_in_subtree(const Vertex& v, const Vertex& x0);

/// Dense (level, index) address used for array storage.
struct Node {
  int level = 0;
  std::uint64_t index = 0;
  friend bool operator==(const Node&, const Node&) = default;
};

inline constexpr std::uint64_t kDefaultVertexBudget = std::uint64_t{1} << 28;

/// The regular tree cut at depth L. Storage is level-offset: the level-k
/// block starts at (m^k - 1)/(m - 1) and has m^k entries.
class TruncatedTree {
 public:
  TruncatedTree(unsigned m, int depth,
                std::uint64_t max_vertices = kDefaultVertexBudget);

  unsigned branching() const { return m_; }
  int depth() const { return depth_; }
  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t interior_count() const { return offsets_.back(); }
  std::size_t leaf_count() const { return level_size(depth_); }
  std::size_t level_size(int k) const { return sizes_[k]; }
  std::size_t level_offset(int k) const { return offsets_[k]; }

  std::size_t id(Node n) const { return offsets_[n.level] + n.index; }
  std::size_t id(const Vertex& v) const;
  Node node(std::size_t id) const;
  Vertex vertex(Node n) const { return Vertex::from_index(m_, n.level, n.index); }
  Node node_of(const Vertex& v) const;

  bool contains(const Vertex& v) const;
  bool is_leaf(Node n) const { return n.level == depth_; }
  bool is_interior(Node n) const { return n.level < depth_; }

  std::size_t parent_id(Node n) const {
    return offsets_[n.level - 1] + n.index / m_;
  }
  /// Id of the first successor; the m successors are contiguous.
  std::size_t first_child_id(Node n) const {
    return offsets_[n.level + 1] + n.index * m_;
  }

  friend bool operator==(const TruncatedTree& a, const TruncatedTree& b) {
    return a.m_ == b.m_ && a.depth_ == b.depth_;
  }

 private:
  unsigned m_;
  int depth_;
  std::size_t vertex_count_ = 0;
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> offsets_;
};

}  // namespace treeconvex
