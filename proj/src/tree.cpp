#include "treeconvex/tree.hpp"

#include <algorithm>
#include <charconv>

namespace treeconvex {

namespace {

void require_same_m(const Vertex& x, const Vertex& y) {
  if (x.branching() != y.branching()) {
    throw TreeError("vertices belong to trees with different branching (" +
                    std::to_string(x.branching()) + " vs " +
                    std::to_string(y.branching()) + ")");
  }
}

// sum_{j=from+1}^{to} m^(-j)
Rational level_sum(unsigned m, int from, int to) {
  Rational s{0};
  for (int j = from + 1; j <= to; ++j) s += edge_length(m, j);
  return s;
}

}  // namespace

Vertex::Vertex(unsigned m, std::vector<unsigned> digits)
    : m_(m), digits_(std::move(digits)) {
  if (m_ < 2) throw TreeError("branching factor must be at least 2");
  // m^level must stay representable for exact psi arithmetic.
  checked_pow(m_, level());
  for (unsigned d : digits_) {
    if (d >= m_) {
      throw TreeError("digit " + std::to_string(d) + " out of range for m=" +
                      std::to_string(m_));
    }
    index_ = index_ * m_ + d;
  }
}

Vertex Vertex::from_index(unsigned m, int level, std::uint64_t index) {
  if (level < 0) throw TreeError("negative level");
  std::vector<unsigned> digits(static_cast<std::size_t>(level));
  for (int i = level - 1; i >= 0; --i) {
    digits[i] = static_cast<unsigned>(index % m);
    index /= m;
  }
  if (index != 0) throw TreeError("index out of range for level");
  return Vertex(m, std::move(digits));
}

Vertex Vertex::parse(unsigned m, std::string_view text) {
  if (text == "root") return root(m);
  std::vector<unsigned> digits;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t dot = text.find('.', pos);
    if (dot == std::string_view::npos) dot = text.size();
    std::string_view tok = text.substr(pos, dot - pos);
    unsigned d = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), d);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
      throw TreeError("malformed vertex '" + std::string(text) + "'");
    }
    digits.push_back(d);
    pos = dot + 1;
  }
  return Vertex(m, std::move(digits));
}

Vertex Vertex::parent() const {
  if (is_root()) throw TreeError("the root has no predecessor");
  return Vertex(m_, {digits_.begin(), digits_.end() - 1});
}

Vertex Vertex::child(unsigned i) const {
  auto d = digits_;
  d.push_back(i);
  return Vertex(m_, std::move(d));
}

std::string Vertex::to_string() const {
  if (is_root()) return "root";
  std::string s;
  for (std::size_t i = 0; i < digits_.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(digits_[i]);
  }
  return s;
}

Rational psi(const Vertex& v) {
  return Rational(static_cast<std::int64_t>(v.index()),
                  checked_pow(v.branching(), v.level()));
}

Rational edge_length(unsigned m, int level) {
  return Rational(1, checked_pow(m, level));
}

Vertex common_ancestor(const Vertex& x, const Vertex& y) {
  require_same_m(x, y);
  auto dx = x.digits();
  auto dy = y.digits();
  auto [ix, iy] = std::mismatch(dx.begin(), dx.end(), dy.begin(), dy.end());
  return Vertex(x.branching(), {dx.begin(), ix});
}

Rational distance(const Vertex& x, const Vertex& y) {
  const int w = common_ancestor(x, y).level();
  return level_sum(x.branching(), w, x.level()) +
         level_sum(x.branching(), w, y.level());
}

std::vector<Vertex> minimal_path(const Vertex& x, const Vertex& y) {
  const Vertex w = common_ancestor(x, y);
  std::vector<Vertex> up;
  for (Vertex v = x; v.level() > w.level(); v = v.parent()) up.push_back(v);
  up.push_back(w);
  std::vector<Vertex> down;
  for (Vertex v = y; v.level() > w.level(); v = v.parent()) down.push_back(v);
  up.insert(up.end(), down.rbegin(), down.rend());
  return up;
}

DyadicInterval interval(const Vertex& v) {
  Rational lo = psi(v);
  return {lo, lo + edge_length(v.branching(), v.level())};
}

bool is_in_subtree(const Vertex& v, const Vertex& x0) {
  require_same_m(v, x0);
  auto dv = v.digits();
  auto d0 = x0.digits();
  return d0.size() <= dv.size() && std::equal(d0.begin(), d0.end(), dv.begin());
}

TruncatedTree::TruncatedTree(unsigned m, int depth, std::uint64_t max_vertices)
    : m_(m), depth_(depth) {
  if (m < 2) throw TreeError("branching factor must be at least 2");
  if (depth < 1) throw TreeError("depth must be at least 1");
  std::uint64_t size = 1;
  std::uint64_t total = 0;
  for (int k = 0; k <= depth; ++k) {
    offsets_.push_back(total);
    sizes_.push_back(size);
    total += size;
    if (total > max_vertices) {
      throw BudgetExceeded("tree with m=" + std::to_string(m) + ", depth=" +
                           std::to_string(depth) + " exceeds the budget of " +
                           std::to_string(max_vertices) + " vertices");
    }
    size *= m;
  }
  vertex_count_ = total;
}

std::size_t TruncatedTree::id(const Vertex& v) const { return id(node_of(v)); }

Node TruncatedTree::node_of(const Vertex& v) const {
  if (!contains(v)) {
    throw TreeError("vertex " + v.to_string() + " is not in the truncated tree");
  }
  return {v.level(), v.index()};
}

Node TruncatedTree::node(std::size_t id) const {
  if (id >= vertex_count_) throw TreeError("vertex id out of range");
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), id);
  const int level = static_cast<int>(it - offsets_.begin()) - 1;
  return {level, id - offsets_[level]};
}

bool TruncatedTree::contains(const Vertex& v) const {
  return v.branching() == m_ && v.level() <= depth_;
}

}  // namespace treeconvex
