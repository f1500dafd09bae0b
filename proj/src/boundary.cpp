#include "treeconvex/boundary.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace treeconvex {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return !s.empty() && ec == std::errc{} && ptr == s.data() + s.size() &&
         std::isfinite(out);
}

std::vector<double> parse_params(std::string_view spec, std::string_view args,
                                 std::size_t expected) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= args.size()) {
    std::size_t comma = args.find(',', pos);
    if (comma == std::string_view::npos) comma = args.size();
    double v = 0;
    if (!parse_double(args.substr(pos, comma - pos), v)) {
      throw DatumFormatError("malformed datum '" + std::string(spec) + "'");
    }
    out.push_back(v);
    pos = comma + 1;
  }
  if (out.size() != expected) {
    throw DatumFormatError("datum '" + std::string(spec) + "' expects " +
                           std::to_string(expected) + " parameter(s)");
  }
  return out;
}

void validate_table(const datum::PiecewiseLinear& pl) {
  if (pl.t.size() < 2) throw DatumFormatError("piecewise-linear datum needs at least two knots");
  if (pl.t.front() != 0.0) throw DatumFormatError("first knot must be at t=0");
  if (pl.t.back() != 1.0) throw DatumFormatError("last knot must be at t=1");
  for (std::size_t i = 1; i < pl.t.size(); ++i) {
    if (!(pl.t[i] > pl.t[i - 1])) {
      throw DatumFormatError("knot " + std::to_string(i + 1) +
                             ": t must be strictly increasing");
    }
  }
}

double interpolate(const datum::PiecewiseLinear& pl, double t) {
  if (t <= pl.t.front()) return pl.g.front();
  if (t >= pl.t.back()) return pl.g.back();
  auto it = std::upper_bound(pl.t.begin(), pl.t.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - pl.t.begin());
  const double w = (t - pl.t[i - 1]) / (pl.t[i] - pl.t[i - 1]);
  return pl.g[i - 1] + w * (pl.g[i] - pl.g[i - 1]);
}

}  // namespace

BoundaryDatum::BoundaryDatum(Kind kind) : kind_(std::move(kind)) {
  if (auto* pl = std::get_if<datum::PiecewiseLinear>(&kind_)) {
    if (pl->t.size() != pl->g.size()) {
      throw DatumFormatError("piecewise-linear datum: t and g lengths differ");
    }
    validate_table(*pl);
  }
}

double BoundaryDatum::operator()(double t) const {
  return std::visit(
      Overloaded{
          [](const datum::Constant& d) { return d.c; },
          [t](const datum::Affine& d) { return d.a * t + d.b; },
          [t](const datum::Power& d) { return std::pow(t, d.p); },
          [t](const datum::AbsDev& d) { return std::abs(t - d.c); },
          [t](const datum::Indicator& d) { return t >= d.lo && t <= d.hi ? 1.0 : 0.0; },
          [t](const datum::PiecewiseLinear& d) { return interpolate(d, t); },
      },
      kind_);
}

std::string BoundaryDatum::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const datum::Constant& d) { os << "constant:" << d.c; },
                 [&](const datum::Affine& d) { os << "affine:" << d.a << ',' << d.b; },
                 [&](const datum::Power& d) { os << "power:" << d.p; },
                 [&](const datum::AbsDev& d) { os << "absdev:" << d.c; },
                 [&](const datum::Indicator& d) {
                   os << "indicator:" << d.lo << ',' << d.hi;
                 },
                 [&](const datum::PiecewiseLinear& d) {
                   os << "piecewise-linear(" << d.t.size() << " knots)";
                 },
             },
             kind_);
  return os.str();
}

BoundaryDatum BoundaryDatum::parse(std::string_view spec) {
  const std::size_t colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw DatumFormatError("unknown datum '" + std::string(spec) + "'");
  }
  const std::string_view name = spec.substr(0, colon);
  const std::string_view args = spec.substr(colon + 1);
  if (name == "constant") return BoundaryDatum(datum::Constant{parse_params(spec, args, 1)[0]});
  if (name == "affine") {
    auto p = parse_params(spec, args, 2);
    return BoundaryDatum(datum::Affine{p[0], p[1]});
  }
  if (name == "power") return BoundaryDatum(datum::Power{parse_params(spec, args, 1)[0]});
  if (name == "absdev") return BoundaryDatum(datum::AbsDev{parse_params(spec, args, 1)[0]});
  if (name == "indicator") {
    auto p = parse_params(spec, args, 2);
    if (p[0] > p[1]) throw DatumFormatError("indicator needs lo <= hi");
    return BoundaryDatum(datum::Indicator{p[0], p[1]});
  }
  throw DatumFormatError("unknown datum '" + std::string(spec) + "'");
}

BoundaryDatum BoundaryDatum::read_csv(std::istream& in) {
  std::string line;
  std::size_t row = 0;
  bool header = false;
  datum::PiecewiseLinear pl;
  std::size_t first_row = 0;
  std::size_t last_row = 0;
  while (std::getline(in, line)) {
    ++row;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    if (!header) {
      if (text != "t,g") {
        throw DatumFormatError("row 1: expected header 't,g', got '" +
                               std::string(text) + "'");
      }
      header = true;
      continue;
    }
    const std::size_t comma = text.find(',');
    double t = 0;
    double g = 0;
    if (comma == std::string_view::npos || !parse_double(text.substr(0, comma), t) ||
        !parse_double(text.substr(comma + 1), g)) {
      throw DatumFormatError("row " + std::to_string(row) + ": malformed entry '" +
                             std::string(text) + "'");
    }
    if (!pl.t.empty() && !(t > pl.t.back())) {
      throw DatumFormatError("row " + std::to_string(row) +
                             ": t must be strictly increasing");
    }
    if (pl.t.empty()) first_row = row;
    last_row = row;
    pl.t.push_back(t);
    pl.g.push_back(g);
  }
  if (!header) throw DatumFormatError("row 1: missing header 't,g'");
  if (pl.t.empty()) throw DatumFormatError("datum table has no rows");
  if (pl.t.front() != 0.0) {
    throw DatumFormatError("row " + std::to_string(first_row) + ": first t must be 0");
  }
  if (pl.t.back() != 1.0) {
    throw DatumFormatError("row " + std::to_string(last_row) + ": last t must be 1");
  }
  return BoundaryDatum(std::move(pl));
}

BoundaryDatum BoundaryDatum::read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DatumFormatError("cannot open datum file '" + path.string() + "'");
  return read_csv(in);
}

SamplingMode SamplingMode::parse(std::string_view text) {
  if (text == "point") return point();
  if (text.starts_with("inf:")) {
    unsigned n = 0;
    const std::string_view num = text.substr(4);
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), n);
    if (ec == std::errc{} && ptr == num.data() + num.size() && n >= 1) {
      return inf_subsample(n);
    }
  }
  throw DatumFormatError("sampling must be 'point' or 'inf:N' with N >= 1, got '" +
                         std::string(text) + "'");
}

std::string SamplingMode::to_string() const {
  return kind == Kind::kPoint ? "point" : "inf:" + std::to_string(samples);
}

std::vector<double> sample_leaves(const BoundaryDatum& g, const TruncatedTree& tree,
                                  SamplingMode mode) {
  const std::size_t n_leaves = tree.leaf_count();
  const double width = static_cast<double>(n_leaves);
  std::vector<double> out(n_leaves);
  for (std::size_t i = 0; i < n_leaves; ++i) {
    if (mode.kind == SamplingMode::Kind::kPoint) {
      out[i] = g(static_cast<double>(i) / width);
      continue;
    }
    // t_j = (i*n + j) / (n * m^L): exact integers, one rounding per point.
    const double n = mode.samples;
    double lowest = g(static_cast<double>(i) / width);
    for (unsigned j = 1; j <= mode.samples; ++j) {
      const double t = (static_cast<double>(i) * n + j) / (n * width);
      lowest = std::min(lowest, g(t));
    }
    out[i] = lowest;
  }
  return out;
}

bool ConvergenceSeries::deltas_positive() const {
  return std::all_of(deltas.begin(), deltas.end(), [](double d) { return d > 0; });
}

bool ConvergenceSeries::deltas_nonincreasing(int from_depth) const {
  for (std::size_t i = 0; i + 1 < deltas.size(); ++i) {
    if (depths[i + 1] < from_depth) continue;
    if (deltas[i + 1] > deltas[i]) return false;
  }
  return true;
}

ConvergenceSeries convergence_study(const BoundaryDatum& g,
                                    const ConvergenceStudyConfig& cfg) {
  if (cfg.depths.empty()) throw TreeError("convergence study needs at least one depth");
  for (std::size_t i = 1; i < cfg.depths.size(); ++i) {
    if (cfg.depths[i] <= cfg.depths[i - 1]) {
      throw TreeError("convergence study depths must be strictly increasing");
    }
  }
  for (int depth : cfg.depths) {
    std::uint64_t leaves = 1;
    for (int i = 0; i < depth && leaves <= cfg.leaf_budget; ++i) leaves *= cfg.m;
    if (leaves > cfg.leaf_budget) {
      throw BudgetExceeded("depth " + std::to_string(depth) + " with m=" +
                           std::to_string(cfg.m) + " exceeds the leaf budget of " +
                           std::to_string(cfg.leaf_budget));
    }
  }
  ConvergenceSeries series;
  for (int depth : cfg.depths) {
    const TruncatedTree tree(cfg.m, depth, std::numeric_limits<std::uint64_t>::max());
    const auto leaves = sample_leaves(g, tree, cfg.sampling);
    SolveReport report = solve(tree, leaves, cfg.solve);
    series.depths.push_back(depth);
    series.root_values.push_back(report.solution.values()[0]);
    series.reports.push_back(std::move(report));
  }
  for (std::size_t i = 1; i < series.root_values.size(); ++i) {
    series.deltas.push_back(std::abs(series.root_values[i] - series.root_values[i - 1]));
  }
  return series;
}

}  // namespace treeconvex
