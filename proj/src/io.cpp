#include "treeconvex/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>
#include <string_view>

namespace treeconvex {

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(pos));
      return out;
    }
    out.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
}

std::string_view strip_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(std::size_t row, const std::string& what) {
  throw FunctionFormatError("row " + std::to_string(row) + ": " + what);
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

void write_function_csv(std::ostream& os, const TreeFunction& u,
                        const std::vector<bool>* coincidence) {
  const auto& t = u.tree();
  os << "vertex,level,index,psi,value";
  if (coincidence) os << ",coincidence";
  os << '\n';
  for (std::size_t id = 0; id < t.vertex_count(); ++id) {
    const Node n = t.node(id);
    const Vertex v = t.vertex(n);
    os << v.to_string() << ',' << n.level << ',' << n.index << ','
       << format_double(psi(v).to_double()) << ',' << format_double(u.values()[id]);
    if (coincidence) os << ',' << ((*coincidence)[id] ? "true" : "false");
    os << '\n';
  }
}

TreeFunction read_function_csv(std::istream& is, const TruncatedTree& tree) {
  std::string line;
  if (!std::getline(is, line)) fail(1, "missing header");
  const auto header = split(strip_cr(line));
  int col_vertex = -1;
  int col_value = -1;
  int col_level = -1;
  int col_index = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "vertex") col_vertex = static_cast<int>(i);
    if (header[i] == "value") col_value = static_cast<int>(i);
    if (header[i] == "level") col_level = static_cast<int>(i);
    if (header[i] == "index") col_index = static_cast<int>(i);
  }
  if (col_vertex < 0 || col_value < 0) fail(1, "header needs 'vertex' and 'value' columns");

  std::vector<double> values(tree.vertex_count(), 0.0);
  std::vector<bool> seen(tree.vertex_count(), false);
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    const std::string_view text = strip_cr(line);
    if (text.empty()) continue;
    const auto cells = split(text);
    if (cells.size() != header.size()) fail(row, "expected " + std::to_string(header.size()) + " columns");
    std::size_t id = 0;
    Node node;
    try {
      const Vertex v = Vertex::parse(tree.branching(), cells[col_vertex]);
      node = tree.node_of(v);
      id = tree.id(node);
    } catch (const std::exception& e) {
      fail(row, e.what());
    }
    auto check_int = [&](int col, std::uint64_t expected, const char* name) {
      if (col < 0) return;
      std::uint64_t got = 0;
      const auto cell = cells[col];
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), got);
      if (ec != std::errc{} || ptr != cell.data() + cell.size() || got != expected) {
        fail(row, std::string(name) + " does not match vertex");
      }
    };
    check_int(col_level, static_cast<std::uint64_t>(node.level), "level");
    check_int(col_index, node.index, "index");
    const auto cell = cells[col_value];
    double value = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
      fail(row, "malformed value '" + std::string(cell) + "'");
    }
    if (seen[id]) fail(row, "duplicate vertex " + std::string(cells[col_vertex]));
    seen[id] = true;
    values[id] = value;
  }
  for (std::size_t id = 0; id < seen.size(); ++id) {
    if (!seen[id]) {
      throw FunctionFormatError("missing vertex " + tree.vertex(tree.node(id)).to_string());
    }
  }
  return TreeFunction(tree, std::move(values));
}

void write_dot(std::ostream& os, const TreeFunction& u) {
  const auto& t = u.tree();
  os << "digraph tree {\n";
  for (std::size_t id = 0; id < t.vertex_count(); ++id) {
    const Node n = t.node(id);
    const std::string name = t.vertex(n).to_string();
    os << "  \"" << name << "\" [label=\"" << name << "\\n"
       << format_double(u.values()[id]) << "\"];\n";
    if (n.level > 0) {
      os << "  \"" << t.vertex(t.node(t.parent_id(n))).to_string() << "\" -> \""
         << name << "\";\n";
    }
  }
  os << "}\n";
}

}  // namespace treeconvex
