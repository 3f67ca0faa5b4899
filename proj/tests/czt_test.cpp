#include <gtest/gtest.h>

#include <set>

#include "gcot/czt.hpp"
#include "gcot/structure.hpp"
#include "oracles.hpp"

using namespace gcot;

namespace {

GroupSpec z4() { return GroupSpec({FactorSpec::Mod({4}, {0, 1, 2, 1})}); }

// Table over Z2 x Z2 in index order (0,0), (0,1), (1,0), (1,1).
GroupSpec klein(Scalar s01, Scalar s10, Scalar s11) {
  return GroupSpec({FactorSpec::Mod({2, 2}, {0, std::move(s01), std::move(s10), std::move(s11)})});
}

std::set<std::string> names(const std::vector<ClassificationRow>& rows, bool feasible) {
  std::set<std::string> out;
  for (const auto& r : rows) {
    if (r.result.feasible == feasible) out.insert(group_name(r.invariant_factors));
  }
  return out;
}

}  // namespace

TEST(Collinearity, Examples) {
  Collinearity a = collinearity(z4(), elem({1}), elem({1}), elem({2}));
  EXPECT_EQ(a.kind, CollinearityKind::kCollinear);
  EXPECT_EQ(a.which, 0);

  GroupSpec l1({FactorSpec::Z2(), FactorSpec::Z2()});
  EXPECT_EQ(collinearity(l1, elem({1, 0}), elem({0, 1}), elem({1, 1})).kind, CollinearityKind::kCollinear);

  GroupSpec cube({FactorSpec::Z2(), FactorSpec::Z2(), FactorSpec::Z2()});
  Collinearity c = collinearity(cube, elem({1, 1, 0}), elem({1, 0, 1}), elem({0, 1, 1}));
  EXPECT_EQ(c.kind, CollinearityKind::kNoncollinear);
  EXPECT_EQ(c.norms, (std::array<Scalar, 3>{2, 2, 2}));

  EXPECT_EQ(collinearity(z4(), elem({2}), elem({2}), elem({0})).kind, CollinearityKind::kTrivial);
  EXPECT_THROW(collinearity(z4(), elem({1}), elem({1}), elem({1})), Error);
}

TEST(HasCzt, Examples) {
  EXPECT_TRUE(has_czt(z4()).holds);
  EXPECT_TRUE(has_czt(klein(Scalar(3, 2), 1, Scalar(5, 2))).holds);
  EXPECT_TRUE(has_czt(klein(Scalar(1, 2), 1, Scalar(3, 2))).holds);
  CztResult cube = has_czt(GroupSpec({FactorSpec::Z2(), FactorSpec::Z2(), FactorSpec::Z2()}));
  EXPECT_FALSE(cube.holds);
  ASSERT_TRUE(cube.witness.has_value());
}

// On Z4 the only nontrivial triples are (1,1,2) and (3,3,2), so the property
// holds exactly when |2| = 2|1|.
TEST(HasCzt, Z4TablesByHand) {
  for (int t1 = 1; t1 <= 6; ++t1) {
    for (int t2 = 1; t2 <= 2 * t1; ++t2) {
      GroupSpec spec({FactorSpec::Mod({4}, {0, t1, t2, t1})});
      ASSERT_FALSE(validate_norm(spec).has_value());
      EXPECT_EQ(has_czt(spec).holds, t2 == 2 * t1) << t1 << " " << t2;
    }
  }
}

// On Z2 x Z2 the nontrivial triples are the three nonzero elements, so the
// property holds exactly when one value is the sum of the other two.
TEST(HasCzt, KleinTablesByHand) {
  for (int a = 1; a <= 6; ++a) {
    for (int b = 1; b <= 6; ++b) {
      for (int c = 1; c <= 6; ++c) {
        GroupSpec spec = klein(a, b, c);
        if (validate_norm(spec)) continue;
        bool expected = a + b == c || a + c == b || b + c == a;
        EXPECT_EQ(has_czt(spec).holds, expected);
      }
    }
  }
}

TEST(NormFeasibility, SmallCyclic) {
  NormFeasibilityResult z2 = czt_norm_feasibility({2});
  EXPECT_TRUE(z2.feasible);
  EXPECT_EQ(z2.witness_table, (std::vector<Scalar>{0, 1}));

  NormFeasibilityResult z4r = czt_norm_feasibility({4});
  EXPECT_TRUE(z4r.feasible);
  EXPECT_EQ(z4r.witness_table, (std::vector<Scalar>{0, 1, 2, 1}));
  ASSERT_TRUE(z4r.witness.has_value());
  EXPECT_TRUE(has_czt(*z4r.witness).holds);
}

TEST(NormFeasibility, Infeasible) {
  for (const std::vector<int>& m : std::vector<std::vector<int>>{{2, 4}, {2, 2, 2}, {8}, {5}, {3}, {6}, {7}}) {
    NormFeasibilityResult r = czt_norm_feasibility(m);
    EXPECT_FALSE(r.feasible) << group_name(m);
    EXPECT_TRUE(r.witness_table.empty());
    EXPECT_EQ(r.refuted_count, r.pattern_count) << group_name(m);
    std::uint64_t three = 1;
    for (std::size_t k = 0; k < r.triples.size(); ++k) three *= 3;
    EXPECT_EQ(r.pattern_count, three);
  }
}

// Every feasible Klein pattern has a round-trip witness, and the canonical
// family after normalising |(1,0)| = 1 <= |(0,1)| is |(1,1)| = 1 + |(0,1)|.
TEST(NormFeasibility, KleinFamily) {
  NormFeasibilityResult r = czt_norm_feasibility({2, 2});
  ASSERT_TRUE(r.feasible);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_TRUE(has_czt(*r.witness).holds);
  EXPECT_FALSE(r.family_description.empty());
  for (int num = 2; num <= 12; ++num) {
    Scalar alpha = testkit::ratio(num, 2);  // alpha >= 1
    // |(1,0)| = 1, |(0,1)| = alpha
    EXPECT_TRUE(has_czt(klein(alpha, 1, 1 + alpha)).holds);
    EXPECT_FALSE(has_czt(klein(alpha, 1, alpha)).holds);
  }
}

TEST(NormFeasibility, WitnessRoundTrip) {
  for (int n = 2; n <= 8; ++n) {
    for (const auto& m : abelian_groups_of_order(n)) {
      NormFeasibilityResult r = czt_norm_feasibility(m);
      if (!r.feasible) continue;
      ASSERT_TRUE(r.witness.has_value());
      EXPECT_FALSE(validate_norm(*r.witness).has_value());
      EXPECT_TRUE(has_czt(*r.witness).holds) << group_name(m);
      Scalar smallest = 0;
      for (const Scalar& x : r.witness_table) {
        if (x != 0 && (smallest == 0 || x < smallest)) smallest = x;
      }
      EXPECT_EQ(smallest, 1);
    }
  }
}

TEST(Classification, UpToOrderEight) {
  auto rows = classify_finite_groups(8);
  EXPECT_EQ(names(rows, true), (std::set<std::string>{"Z2", "Z4", "Z2xZ2"}));
  EXPECT_EQ(names(rows, false), (std::set<std::string>{"Z3", "Z5", "Z6", "Z7", "Z8", "Z2xZ2xZ2", "Z2xZ4"}));
  for (const auto& r : rows) {
    if (group_name(r.invariant_factors) == "Z4") {
      EXPECT_EQ(r.result.witness_table, (std::vector<Scalar>{0, 1, 2, 1}));
    }
  }
}

TEST(Classification, GroupsOfOrder) {
  std::set<std::string> eight;
  for (const auto& m : abelian_groups_of_order(8)) eight.insert(group_name(m));
  EXPECT_EQ(eight, (std::set<std::string>{"Z8", "Z2xZ4", "Z2xZ2xZ2"}));
  EXPECT_EQ(abelian_groups_of_order(6).size(), 1u);
}

TEST(CyclicForcing, Examples) {
  CyclicForcingResult lin = czt_cyclic_forcing({1, 2, 3, 4, 5});
  EXPECT_TRUE(lin.ok);

  CyclicForcingResult bent = czt_cyclic_forcing({1, 2, 1});
  EXPECT_FALSE(bent.ok);
  EXPECT_EQ(bent.step, 3);
  EXPECT_FALSE(bent.witness.has_value());

  CyclicForcingResult flat = czt_cyclic_forcing({1, 1});
  EXPECT_FALSE(flat.ok);
  EXPECT_EQ(flat.step, 2);
  ASSERT_TRUE(flat.witness.has_value());
  EXPECT_EQ(*flat.witness, (std::array<int, 3>{-1, -1, 2}));
}

// Linear segments always pass; random nonlinear ones always report a step.
TEST(CyclicForcing, Randomized) {
  testkit::Rng rng(73);
  for (int trial = 0; trial < 100; ++trial) {
    int n = rng.uniform(2, 8);
    Scalar unit = testkit::ratio(rng.uniform(1, 6), rng.uniform(1, 3));
    std::vector<Scalar> vals;
    for (int k = 1; k <= n; ++k) vals.push_back(k * unit);
    EXPECT_TRUE(czt_cyclic_forcing(vals).ok);
    int bump = rng.uniform(1, n - 1);
    vals[bump] += unit;
    CyclicForcingResult r = czt_cyclic_forcing(vals);
    EXPECT_FALSE(r.ok);
    EXPECT_EQ(r.step, bump + 1);
  }
}

TEST(SampledCzt, Pullback) {
  NormOracle<IntVec> nrm = [](const IntVec& x) { return abs_value(Scalar(2 * x.v[0] + 3 * x.v[1])); };
  std::vector<std::array<IntVec, 3>> triples;
  for (long a = -5; a <= 5; ++a) {
    for (long b = -5; b <= 5; ++b) {
      for (long c = -5; c <= 5; ++c) {
        for (long d = -5; d <= 5; ++d) {
          IntVec x{{a, b}}, y{{c, d}};
          triples.push_back({x, y, -(x + y)});
        }
      }
    }
  }
  EXPECT_TRUE(czt_sampled(nrm, triples).ok);
  EXPECT_THROW(czt_sampled(nrm, std::vector<std::array<IntVec, 3>>{{IntVec{{1, 0}}, IntVec{{0, 1}}, IntVec{{0, 0}}}}),
               Error);
}
