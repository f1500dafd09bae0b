#pragma once

// Function suites shared by the unit and acceptance tests for the
// characterization checks: random functions plus hand-built adversarial ones.

#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "treeconvex/convexity.hpp"
#include "treeconvex/solver.hpp"

namespace suite {

using namespace treeconvex;

struct Case {
  std::string label;
  TreeFunction u;
};

/// Subtree enumeration grows doubly exponentially: m = 3 stays at depth <= 3
/// so full-depth enumeration fits the 10^6 budget; m = 2 goes to depth 4.
inline TruncatedTree random_tree(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 4);
  switch (pick(rng)) {
    case 0: return TruncatedTree(2, 2);
    case 1: return TruncatedTree(2, 3);
    case 2: return TruncatedTree(2, 4);
    case 3: return TruncatedTree(3, 2);
    default: return TruncatedTree(3, 3);
  }
}

inline TreeFunction envelope(const TruncatedTree& t, std::mt19937_64& rng, Variant v) {
  SolveConfig cfg;
  cfg.variant = v;
  const auto leaves = oracle::random_values(rng, t.leaf_count());
  return solve_dirichlet(t, leaves, cfg).solution;
}

inline TreeFunction perturb(TreeFunction u, std::mt19937_64& rng, double size) {
  std::uniform_int_distribution<std::size_t> pick(0, u.tree().vertex_count() - 1);
  std::bernoulli_distribution sign(0.5);
  u.values()[pick(rng)] += sign(rng) ? size : -size;
  return u;
}

/// 200 random functions across five generators.
inline std::vector<Case> random_cases(std::uint64_t seed = 42) {
  std::mt19937_64 rng(seed);
  std::vector<Case> out;
  for (int i = 0; i < 200; ++i) {
    const TruncatedTree t = random_tree(rng);
    switch (i % 5) {
      case 0:
        out.push_back({"noise", TreeFunction(t, oracle::random_values(rng, t.vertex_count()))});
        break;
      case 1:
        out.push_back({"convex-envelope", envelope(t, rng, Variant::kConvex)});
        break;
      case 2:
        out.push_back({"binary-envelope", envelope(t, rng, Variant::kBinary)});
        break;
      case 3:
        out.push_back({"perturbed-convex",
                       perturb(envelope(t, rng, Variant::kConvex), rng, 1e-3)});
        break;
      default: {
        // max of shifted reference indicators is convex; then a light dent
        std::uniform_int_distribution<std::size_t> pick(1, t.vertex_count() - 1);
        TreeFunction u(t, 0.0);
        for (int r = 0; r < 3; ++r) {
          const auto ref = reference_convex_indicator(t, t.vertex(t.node(pick(rng))));
          for (std::size_t k = 0; k < u.values().size(); ++k) {
            u.values()[k] = std::max(u.values()[k], ref.values()[k] - 0.1 * r);
          }
        }
        out.push_back({"max-of-indicators", i % 10 == 4 ? u : perturb(u, rng, 0.05)});
      }
    }
  }
  return out;
}

inline std::vector<Case> adversarial_cases() {
  std::vector<Case> out;
  const TruncatedTree t2(2, 4);
  const TruncatedTree t3(3, 3);
  const TruncatedTree small(2, 2);

  out.push_back({"constant", TreeFunction(t2, 1.25)});
  out.push_back({"ref-convex m=2 x0=0.1", reference_convex_indicator(t2, Vertex::parse(2, "0.1"))});
  out.push_back({"ref-convex m=3 x0=1", reference_convex_indicator(t3, Vertex::parse(3, "1"))});
  out.push_back({"ref-binary m=2 x0=1", reference_binary_indicator(t2, Vertex::parse(2, "1"))});
  out.push_back({"ref-binary m=3 x0=2.0", reference_binary_indicator(t3, Vertex::parse(3, "2.0"))});

  TreeFunction spike(small, 0.0);
  spike.values()[0] = 5.0;
  out.push_back({"root spike", spike});

  for (const auto* t : {&t2, &t3}) {
    TreeFunction level_up(*t, 0.0);
    TreeFunction level_down(*t, 0.0);
    TreeFunction geometric(*t, 0.0);
    for (std::size_t id = 0; id < t->vertex_count(); ++id) {
      const int l = t->node(id).level;
      level_up.values()[id] = l;
      level_down.values()[id] = -l;
      geometric.values()[id] = -std::ldexp(1.0, -l);
    }
    out.push_back({"level", level_up});
    out.push_back({"minus level", level_down});
    out.push_back({"minus 2^-level", geometric});
  }

  // Convex function with one interior vertex lifted just past the tolerance.
  TreeFunction lifted = reference_convex_indicator(t3, Vertex::parse(3, "0"));
  lifted.at(Vertex::parse(3, "0.1")) += 1e-6;
  out.push_back({"lifted interior", lifted});

  // Lower a leaf of a convex function: breaks the parent's pair term.
  TreeFunction dented = reference_convex_indicator(t2, Vertex::parse(2, "1"));
  dented.at(Vertex::parse(2, "1.1.1.1")) -= 0.5;
  out.push_back({"dented leaf", dented});

  // Raising a leaf keeps every inequality.
  TreeFunction raised = reference_convex_indicator(t2, Vertex::parse(2, "1"));
  raised.at(Vertex::parse(2, "0.0.0.0")) += 3.0;
  out.push_back({"raised leaf", raised});

  // Binary convex along successors but broken through the predecessor term.
  TreeFunction sink(t3, 0.0);
  sink.at(Vertex::parse(3, "1")) = 1.0;
  for (unsigned i = 0; i < 3; ++i) sink.at(Vertex::parse(3, "1").child(i)) = 1.0;
  for (unsigned i = 0; i < 3; ++i) {
    for (unsigned j = 0; j < 3; ++j) sink.at(Vertex::parse(3, "1").child(i).child(j)) = 1.0;
  }
  out.push_back({"binary-not-convex block", sink});

  // Parabola in psi at every vertex.
  TreeFunction parab(t3, 0.0);
  for (std::size_t id = 0; id < t3.vertex_count(); ++id) {
    const double p = psi(t3.vertex(t3.node(id))).to_double();
    parab.values()[id] = p * p;
  }
  out.push_back({"psi squared", parab});

  // Large-magnitude convex function.
  TreeFunction big = reference_convex_indicator(t2, Vertex::parse(2, "0.0"));
  for (auto& v : big.values()) v = 1e6 * v - 3e5;
  out.push_back({"scaled indicator", big});

  std::mt19937_64 rng(99);

  // Sum of two envelopes, and their difference.
  TreeFunction a = envelope(t3, rng, Variant::kConvex);
  TreeFunction b = envelope(t3, rng, Variant::kConvex);
  TreeFunction diff = a;
  for (std::size_t k = 0; k < a.values().size(); ++k) {
    a.values()[k] += b.values()[k];
    diff.values()[k] -= b.values()[k];
  }
  out.push_back({"envelope sum", a});
  out.push_back({"envelope difference", diff});
  return out;
}

inline std::vector<Case> characterization_suite() {
  auto all = random_cases();
  auto adv = adversarial_cases();
  all.insert(all.end(), adv.begin(), adv.end());
  return all;
}

}  // namespace suite
