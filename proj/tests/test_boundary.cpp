#include <doctest.h>

#include <cmath>
#include <sstream>

#include "treeconvex/boundary.hpp"
#include "treeconvex/convexity.hpp"

using namespace treeconvex;

namespace {

std::string error_of(const std::string& csv) {
  std::istringstream in(csv);
  try {
    BoundaryDatum::read_csv(in);
  } catch (const DatumFormatError& e) {
    return e.what();
  }
  return "";
}

ConvergenceStudyConfig study(unsigned m, std::vector<int> depths, Variant v = Variant::kConvex) {
  ConvergenceStudyConfig c;
  c.m = m;
  c.depths = std::move(depths);
  c.solve.variant = v;
  return c;
}

}  // namespace

TEST_CASE("builtin families") {
  CHECK(BoundaryDatum::parse("constant:2.5")(0.3) == 2.5);
  CHECK(BoundaryDatum::parse("affine:2,-1")(0.25) == -0.5);
  CHECK(BoundaryDatum::parse("power:2")(0.5) == 0.25);
  CHECK(BoundaryDatum::parse("absdev:0.5")(0.125) == 0.375);
  const auto ind = BoundaryDatum::parse("indicator:0.5,0.75");
  CHECK(ind(0.5) == 1.0);
  CHECK(ind(0.75) == 1.0);
  CHECK(ind(0.8) == 0.0);
  CHECK_THROWS_AS(BoundaryDatum::parse("indicator:0.7,0.2"), DatumFormatError);
  CHECK_THROWS_AS(BoundaryDatum::parse("power"), DatumFormatError);
  CHECK_THROWS_AS(BoundaryDatum::parse("cubic:1"), DatumFormatError);
  CHECK_THROWS_AS(BoundaryDatum::parse("affine:1"), DatumFormatError);
}

TEST_CASE("piecewise-linear CSV") {
  std::istringstream in("t,g\n0,1\n0.5,0\n1,2\n");
  const auto g = BoundaryDatum::read_csv(in);
  CHECK(g(0) == 1.0);
  CHECK(g(0.25) == 0.5);
  CHECK(g(0.75) == 1.0);
  CHECK(g(1) == 2.0);
}

TEST_CASE("malformed CSV errors name the row") {
  CHECK(error_of("t,g\n0,1\n0.5,2\n0.5,3\n1,0\n").find("row 4") != std::string::npos);
  CHECK(error_of("t,g\n0,1\n0.7,2\n0.2,3\n1,0\n").find("strictly increasing") !=
        std::string::npos);
  CHECK(error_of("t,g\n0,1\nabc,2\n1,0\n").find("row 3") != std::string::npos);
  CHECK(error_of("x,y\n0,1\n1,0\n").find("row 1") != std::string::npos);
  CHECK(error_of("t,g\n0.1,1\n1,0\n").find("row 2") != std::string::npos);
  CHECK(error_of("t,g\n0,1\n0.9,0\n\n").find("row 3") != std::string::npos);
  CHECK(error_of("t,g\n") != "");
  CHECK(error_of("t,g\n0,1\n1,0\n") == "");
}

TEST_CASE("point sampling") {
  const TruncatedTree t(2, 2);
  const auto leaves = sample_leaves(BoundaryDatum::parse("affine:1,0"), t);
  CHECK(leaves == std::vector<double>{0, 0.25, 0.5, 0.75});
  const auto c = sample_leaves(BoundaryDatum::parse("constant:-3"), TruncatedTree(3, 3),
                               SamplingMode::inf_subsample(4));
  for (double v : c) CHECK(v == -3.0);
}

TEST_CASE("indicator sampling marks the leaves below x0") {
  const TruncatedTree t(3, 4);
  const Vertex x0(3, {1, 2});
  const auto iv = interval(x0);
  const auto g = BoundaryDatum(datum::Indicator{iv.lo.to_double(), iv.hi.to_double()});
  const auto leaves = sample_leaves(g, t);
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    const Vertex leaf = Vertex::from_index(3, 4, i);
    if (is_in_subtree(leaf, x0)) CHECK(leaves[i] == 1.0);
  }
}

TEST_CASE("infimum sampling lies below point sampling") {
  for (const char* spec : {"power:2", "absdev:0.3", "affine:-1,2", "indicator:0.2,0.6"}) {
    const auto g = BoundaryDatum::parse(spec);
    const TruncatedTree t(3, 4);
    const auto point = sample_leaves(g, t);
    const auto inf = sample_leaves(g, t, SamplingMode::parse("inf:8"));
    for (std::size_t i = 0; i < point.size(); ++i) CHECK(inf[i] <= point[i]);
  }
  // increasing g: leaf values increase with the leaf index, and the
  // infimum over a leaf interval is its left endpoint value
  const auto g = BoundaryDatum::parse("power:3");
  const TruncatedTree t(2, 6);
  const auto point = sample_leaves(g, t);
  const auto inf = sample_leaves(g, t, SamplingMode::inf_subsample(5));
  for (std::size_t i = 1; i < point.size(); ++i) CHECK(point[i] > point[i - 1]);
  CHECK(inf == point);
}

TEST_CASE("sampling mode text") {
  CHECK(SamplingMode::parse("point").kind == SamplingMode::Kind::kPoint);
  CHECK(SamplingMode::parse("inf:12").samples == 12);
  CHECK(SamplingMode::inf_subsample(3).to_string() == "inf:3");
  CHECK_THROWS_AS(SamplingMode::parse("inf:0"), DatumFormatError);
  CHECK_THROWS_AS(SamplingMode::parse("inf:x"), DatumFormatError);
  CHECK_THROWS_AS(SamplingMode::parse("mean"), DatumFormatError);
}

TEST_CASE("constant datum gives zero deltas") {
  const auto s = convergence_study(BoundaryDatum::parse("constant:0.5"), study(2, {3, 4, 5}));
  CHECK(s.depths == std::vector<int>{3, 4, 5});
  CHECK(s.deltas == std::vector<double>{0, 0});
  CHECK_FALSE(s.deltas_positive());
  CHECK(s.deltas_nonincreasing(4));
}

TEST_CASE("squared datum: positive, shrinking deltas") {
  const auto s = convergence_study(BoundaryDatum::parse("power:2"), study(2, {4, 5, 6, 7, 8, 9}));
  REQUIRE(s.deltas.size() == 5);
  CHECK(s.deltas_positive());
  CHECK(s.deltas_nonincreasing(5));
  for (const auto& r : s.reports) {
    CHECK(r.converged);
    CHECK(r.monotone);
  }
  for (double v : s.root_values) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("nonincreasing check reads deltas by their deeper depth") {
  ConvergenceSeries s;
  s.depths = {4, 5, 6, 7};
  s.deltas = {0.1, 0.3, 0.2};  // listed at depths 5, 6, 7
  CHECK_FALSE(s.deltas_nonincreasing(5));
  CHECK(s.deltas_nonincreasing(6));
}

TEST_CASE("binary study of an indicator recovers the reference below x0") {
  const Vertex x0(2, {1});
  const auto iv = interval(x0);
  const BoundaryDatum g(datum::Indicator{iv.lo.to_double(), iv.hi.to_double()});
  const auto s = convergence_study(g, study(2, {3, 5, 7}, Variant::kBinary));
  for (std::size_t i = 0; i < s.depths.size(); ++i) {
    const auto& u = s.reports[i].solution;
    const auto ref = reference_binary_indicator(u.tree(), x0);
    const auto& t = u.tree();
    for (std::size_t id = 0; id < t.vertex_count(); ++id) {
      const Vertex v = t.vertex(t.node(id));
      if (is_in_subtree(v, x0)) REQUIRE(u.values()[id] == ref.values()[id]);
    }
    CHECK(s.root_values[i] == u.values()[0]);
    CHECK(s.root_values[i] >= 0.0);
    CHECK(s.root_values[i] <= 1.0);
  }
}

TEST_CASE("study configuration errors") {
  const auto g = BoundaryDatum::parse("power:2");
  CHECK_THROWS_AS(convergence_study(g, study(2, {})), TreeError);
  CHECK_THROWS_AS(convergence_study(g, study(2, {5, 5})), TreeError);
  try {
    convergence_study(g, study(2, {4, 25}));
    FAIL("expected BudgetExceeded");
  } catch (const BudgetExceeded& e) {
    CHECK(std::string(e.what()).find("depth 25") != std::string::npos);
  }
}
