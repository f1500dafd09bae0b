#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "treeconvex/solver.hpp"
#include "treeconvex/tree.hpp"
#include "treeconvex/tree_function.hpp"

namespace treeconvex {

namespace datum {

struct Constant {
  double c;
};
/// g(t) = a*t + b
struct Affine {
  double a;
  double b;
};
/// g(t) = t^p
struct Power {
  double p;
};
/// g(t) = |t - c|
struct AbsDev {
  double c;
};
/// g(t) = 1 on the closed interval [lo, hi], 0 elsewhere.
struct Indicator {
  double lo;
  double hi;
};
/// Linear interpolation between knots (t_i, g_i); t strictly increasing,
/// first knot at 0 and last at 1.
struct PiecewiseLinear {
  std::vector<double> t;
  std::vector<double> g;
};

}  // namespace datum

/// A boundary function g on [0, 1].
class BoundaryDatum {
 public:
  using Kind = std::variant<datum::Constant, datum::Affine, datum::Power,
                            datum::AbsDev, datum::Indicator,
                            datum::PiecewiseLinear>;

  BoundaryDatum(Kind kind);  // NOLINT: implicit from any family member

  double operator()(double t) const;
  const Kind& kind() const { return kind_; }
  std::string describe() const;

  /// Parses "constant:C", "affine:A,B", "power:P", "absdev:C",
  /// "indicator:LO,HI".
  static BoundaryDatum parse(std::string_view spec);
  /// Reads a "t,g" CSV. Throws DatumFormatError naming the offending row.
  static BoundaryDatum read_csv(std::istream& in);
  static BoundaryDatum read_csv(const std::filesystem::path& path);

 private:
  Kind kind_;
};

class DatumFormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SamplingMode {
  enum class Kind { kPoint, kInfSubsample } kind = Kind::kPoint;
  unsigned samples = 16;  // n for kInfSubsample: n+1 points of I_leaf

  static SamplingMode point() { return {}; }
  static SamplingMode inf_subsample(unsigned n = 16) {
    return {Kind::kInfSubsample, n};
  }
  /// "point" or "inf:N".
  static SamplingMode parse(std::string_view text);
  std::string to_string() const;
};

/// Leaf values in leaf-index order: g(psi(leaf)) in point mode, or the
/// minimum of g over n+1 uniform points of I_leaf.
std::vector<double> sample_leaves(const BoundaryDatum& g, const TruncatedTree& tree,
                                  SamplingMode mode = SamplingMode::point());

inline constexpr std::uint64_t kConvergenceLeafBudget = std::uint64_t{1} << 24;

struct ConvergenceSeries {
  std::vector<int> depths;
  std::vector<double> root_values;
  std::vector<double> deltas;  // deltas[i] = |root(L_{i+1}) - root(L_i)|, listed at L_{i+1}
  std::vector<SolveReport> reports;

  bool deltas_positive() const;
  /// Deltas listed at depths >= `from_depth` are non-increasing.
  bool deltas_nonincreasing(int from_depth) const;
};

struct ConvergenceStudyConfig {
  unsigned m = 2;
  std::vector<int> depths;
  SamplingMode sampling;
  SolveConfig solve;
  std::uint64_t leaf_budget = kConvergenceLeafBudget;
};

/// Solves at each depth and records root values and successive deltas.
/// Throws TreeError for non-increasing depths and BudgetExceeded when
/// m^depth exceeds the leaf budget (naming the depth).
ConvergenceSeries convergence_study(const BoundaryDatum& g,
                                    const ConvergenceStudyConfig& cfg);

}  // namespace treeconvex
