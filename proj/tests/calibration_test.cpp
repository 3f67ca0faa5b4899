#include <gtest/gtest.h>

#include "gcot/calibration.hpp"
#include "gcot/solver.hpp"
#include "oracles.hpp"

using namespace gcot;

namespace {

FiniteMetric matrix(std::vector<std::vector<long>> rows) {
  Matrix m;
  for (const auto& r : rows) {
    std::vector<Scalar> out;
    for (long x : r) out.emplace_back(x);
    m.push_back(out);
  }
  return metric_from_matrix(std::move(m));
}

GroupSpec z() { return GroupSpec({FactorSpec::Int()}); }
GroupSpec z2() { return GroupSpec({FactorSpec::Z2()}); }

// d12 = 2, d13 = 1, d23 = 2.
FiniteMetric triangle() { return matrix({{0, 2, 1}, {2, 0, 2}, {1, 2, 0}}); }

Tree path(std::vector<long> lengths) {
  std::vector<TreeEdge> edges;
  for (std::size_t k = 0; k < lengths.size(); ++k) {
    edges.push_back({static_cast<int>(k), static_cast<int>(k + 1), Scalar(lengths[k])});
  }
  return Tree::FromEdges(static_cast<int>(lengths.size()) + 1, edges);
}

FactorCalibration from_dual(const Instance& part) {
  std::vector<Scalar> unit = kantorovich_dual(part).potentials;
  for (Scalar& x : unit) x /= part.group().factor(0).weight;
  IntervalTree it = interval_tree_from_potential(unit);
  return {it.tree, it.map};
}

// Pairs {0,1} and {2,3} at distance 1, everything else 10.
FiniteMetric two_pairs() { return matrix({{0, 1, 10, 10}, {1, 0, 10, 10}, {10, 10, 0, 1}, {10, 10, 1, 0}}); }

// Cherries a = 4 over {0,1} and b = 5 over {2,3}, joined by length 9.
FactorCalibration matching_tree() {
  Scalar half(1, 2);
  Tree t = Tree::FromEdges(6, {{0, 4, half}, {1, 4, half}, {2, 5, half}, {3, 5, half}, {4, 5, Scalar(9)}});
  return {t, {0, 1, 2, 3}};
}

}  // namespace

TEST(Kantorovich, Examples) {
  DualCertificate a = kantorovich_dual(Instance(triangle(), z(), {elem({1}), elem({1}), elem({-2})}));
  EXPECT_EQ(a.potentials, (std::vector<Scalar>{1, 2, 0}));
  EXPECT_EQ(a.value, 3);

  DualCertificate b = kantorovich_dual(Instance(matrix({{0, 5}, {5, 0}}), z(), {elem({3}), elem({-3})}));
  EXPECT_EQ(b.potentials, (std::vector<Scalar>{5, 0}));
  EXPECT_EQ(b.value, 15);

  EXPECT_EQ(kantorovich_dual(Instance(triangle(), z(), {elem({0}), elem({0}), elem({0})})).value, 0);
  EXPECT_THROW(kantorovich_dual(Instance(two_pairs(), z2(), std::vector<GroupElement>(4, elem({1})))), Error);
}

TEST(TreeFill, Examples) {
  Tree p = path({1, 1});
  TreeFilling f = tree_fill(p, {{0, elem({4})}, {2, elem({-4})}}, z());
  EXPECT_EQ(f.mass, 8);
  EXPECT_EQ(f.chain.edge_count(), 2u);

  Tree star = Tree::FromEdges(4, {{0, 1, Scalar(1)}, {0, 2, Scalar(2)}, {0, 3, Scalar(3)}});
  EXPECT_EQ(tree_fill(star, {{1, elem({1})}, {2, elem({2})}, {3, elem({-3})}}, z()).mass, 1 + 4 + 9);

  Tree claw = Tree::FromEdges(5, {{0, 1, Scalar(1)}, {0, 2, Scalar(1)}, {0, 3, Scalar(1)}, {0, 4, Scalar(1)}});
  EXPECT_EQ(tree_fill(claw, {{1, elem({1})}, {2, elem({1})}, {3, elem({1})}, {4, elem({1})}}, z2()).mass, 4);

  EXPECT_THROW(tree_fill(p, {{0, elem({1})}}, z()), Error);
}

// The fill's boundary is the input chain.
TEST(TreeFill, BoundaryMatches) {
  testkit::Rng rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    int n = rng.uniform(1, 7);
    std::vector<TreeEdge> edges;
    for (int v = 1; v < n; ++v) edges.push_back({rng.uniform(0, v - 1), v, Scalar(rng.uniform(1, 5))});
    Tree t = Tree::FromEdges(n, edges);
    GroupSpec spec = testkit::random_lattice_group(rng);
    auto coeffs = testkit::random_zero_sum(rng, spec, n);
    Chain0 chain;
    for (int v = 0; v < n; ++v) {
      if (!is_zero(coeffs[v])) chain[v] = coeffs[v];
    }
    TreeFilling f = tree_fill(t, chain, spec);
    EXPECT_EQ(boundary(f.chain), chain);
    EXPECT_EQ(mass(f.chain), f.mass);
  }
}

TEST(TreeMap, Verify) {
  FiniteMetric line = matrix({{0, 1, 3}, {1, 0, 2}, {3, 2, 0}});
  EXPECT_TRUE(verify_tree_map(line, path({1, 2}), {0, 1, 2}).ok);

  LipschitzCheck bad = verify_tree_map(matrix({{0, 1}, {1, 0}}), path({2}), {0, 1});
  EXPECT_FALSE(bad.ok);
  EXPECT_EQ(bad.i, 0);
  EXPECT_EQ(bad.j, 1);
  EXPECT_EQ(bad.tree_distance, 2);
  EXPECT_EQ(bad.metric_distance, 1);

  EXPECT_TRUE(verify_tree_map(two_pairs(), matching_tree().tree, matching_tree().map).ok);
}

TEST(StarGlue, Examples) {
  GluedTree g = star_glue({path({1}), path({2})}, Scalar(100));
  EXPECT_EQ(g.tree.vertex_count(), 5);
  EXPECT_EQ(g.offsets, (std::vector<int>{0, 2}));
  EXPECT_EQ(g.hub, 4);
  EXPECT_EQ(g.tree.distances_from(1)[3], 1 + 100 + 100 + 2);

  GluedTree one = star_glue({path({3, 1})}, Scalar(7));
  EXPECT_EQ(one.tree.vertex_count(), 4);
  EXPECT_EQ(tree_fill(one.tree, {{0, elem({1})}, {2, elem({-1})}}, z()).mass, 4);
  EXPECT_THROW(star_glue({path({1})}, Scalar(0)), Error);
}

// Subtree chains that each sum to zero fill independently.
TEST(StarGlue, FillsDecompose) {
  testkit::Rng rng(103);
  for (int trial = 0; trial < 30; ++trial) {
    GroupSpec spec = testkit::random_lattice_group(rng);
    std::vector<Tree> trees;
    std::vector<Chain0> chains;
    Scalar parts = 0;
    for (int k = rng.uniform(1, 3); k > 0; --k) {
      int n = rng.uniform(1, 4);
      std::vector<TreeEdge> edges;
      for (int v = 1; v < n; ++v) edges.push_back({rng.uniform(0, v - 1), v, Scalar(rng.uniform(1, 4))});
      trees.push_back(Tree::FromEdges(n, edges));
      auto coeffs = testkit::random_zero_sum(rng, spec, n);
      Chain0 c;
      for (int v = 0; v < n; ++v) {
        if (!is_zero(coeffs[v])) c[v] = coeffs[v];
      }
      parts += tree_fill(trees.back(), c, spec).mass;
      chains.push_back(c);
    }
    GluedTree g = star_glue(trees, Scalar(rng.uniform(1, 50)));
    Chain0 all;
    for (std::size_t t = 0; t < chains.size(); ++t) {
      for (const auto& [v, c] : chains[t]) all[g.offsets[t] + v] = c;
    }
    EXPECT_EQ(tree_fill(g.tree, all, spec).mass, parts);
  }
}

TEST(CalibrationValue, IntervalTreeIsExact) {
  Instance inst(triangle(), z(), {elem({1}), elem({1}), elem({-2})});
  CalibrationValue cv = calibration_value(inst, {from_dual(inst)});
  EXPECT_EQ(cv.value, 3);
  EXPECT_EQ(cv.value, *solve_flow(inst).cost);
}

TEST(CalibrationValue, TrivialTree) {
  Instance inst(triangle(), z(), {elem({1}), elem({1}), elem({-2})});
  EXPECT_EQ(calibration_value(inst, {{Tree(), {0, 0, 0}}}).value, 0);
}

TEST(CalibrationValue, ProductGlued) {
  GroupSpec spec({FactorSpec::Int(), FactorSpec::Z2()});
  Instance inst(triangle(), spec, {elem({1, 1}), elem({1, 1}), elem({-2, 0})});
  FactorCalibration zc = from_dual(inst.project_factor(0));
  FactorCalibration pc{path({2}), {0, 1, 0}};
  CalibrationValue cv = calibration_value(inst, {zc, pc});
  EXPECT_EQ(cv.per_factor, (std::vector<Scalar>{3, 2}));
  EXPECT_EQ(cv.value, 5);
  EXPECT_EQ(cv.value, *solve(inst).cost);
}

TEST(CalibrationValue, Errors) {
  Instance inst(triangle(), z(), {elem({1}), elem({1}), elem({-2})});
  EXPECT_THROW(calibration_value(inst, {}), Error);
  try {
    calibration_value(inst, {{path({5}), {0, 1, 0}}});
    FAIL() << "non-Lipschitz map accepted";
  } catch (const LipschitzViolationError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLipschitzViolation);
    EXPECT_EQ(e.factor(), 0u);
  }
}

TEST(Converse, Examples) {
  Instance two(matrix({{0, 4}, {4, 0}}), z(), {elem({2}), elem({-2})});
  EXPECT_TRUE(converse_check(two, {from_dual(two)}).nbp);

  Instance pairs(two_pairs(), z2(), std::vector<GroupElement>(4, elem({1})));
  EXPECT_EQ(calibration_value(pairs, {matching_tree()}).value, 2);
  EXPECT_TRUE(converse_check(pairs, {matching_tree()}).nbp);

  try {
    converse_check(pairs, {{Tree(), {0, 0, 0, 0}}});
    FAIL() << "suboptimal tree accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotCalibrated);
  }
}

TEST(Duality, StrongForSingleFactor) {
  testkit::Rng rng(107);
  for (int trial = 0; trial < 60; ++trial) {
    int n = rng.uniform(2, 6);
    Scalar w = testkit::ratio(rng.uniform(1, 6), rng.uniform(1, 3));
    GroupSpec spec({trial % 2 ? FactorSpec::Int(w) : FactorSpec::Real(w)});
    Instance inst(testkit::random_metric(rng, n), spec, testkit::random_zero_sum(rng, spec, n));
    DualCertificate cert = kantorovich_dual(inst);
    Scalar primal = *solve_flow(inst).cost;
    EXPECT_EQ(cert.value, primal);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) EXPECT_LE(abs_value(cert.potentials[i] - cert.potentials[j]), w * inst.metric()(i, j));
    }
    EXPECT_EQ(calibration_value(inst, {from_dual(inst)}).value, primal);
  }
}

// Any tree map that is 1-Lipschitz bounds the cost from below. The metric is
// the max of a random metric and the pulled-back tree distance.
TEST(Duality, WeakForArbitraryTrees) {
  testkit::Rng rng(109);
  for (int trial = 0; trial < 60; ++trial) {
    GroupSpec spec = trial % 2 ? testkit::random_finite_group(rng) : testkit::random_lattice_group(rng, 2);
    int n = rng.uniform(2, 4);
    FiniteMetric base = testkit::random_metric(rng, n);
    std::vector<FactorCalibration> cands;
    Matrix d(n, std::vector<Scalar>(n, Scalar(0)));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) d[i][j] = base(i, j);
    }
    for (std::size_t f = 0; f < spec.factor_count(); ++f) {
      int tv = rng.uniform(1, 5);
      std::vector<TreeEdge> edges;
      for (int v = 1; v < tv; ++v) edges.push_back({rng.uniform(0, v - 1), v, Scalar(rng.uniform(1, 6))});
      Tree t = Tree::FromEdges(tv, edges);
      TreeMap map;
      for (int i = 0; i < n; ++i) map.push_back(rng.uniform(0, tv - 1));
      FiniteMetric tm = t.path_metric();
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) d[i][j] = std::max(d[i][j], tm(map[i], map[j]));
      }
      cands.push_back({t, map});
    }
    Instance inst(metric_from_matrix(d), spec, testkit::random_zero_sum(rng, spec, n));
    EXPECT_LE(calibration_value(inst, cands).value, *solve(inst).cost);
  }
}
