#include <gtest/gtest.h>

#include <set>

#include "gcot/metric.hpp"
#include "oracles.hpp"

using namespace gcot;

namespace {

Matrix ints(std::vector<std::vector<long>> rows) {
  Matrix m;
  for (const auto& r : rows) {
    std::vector<Scalar> out;
    for (long x : r) out.emplace_back(x);
    m.push_back(out);
  }
  return m;
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kInvalidInput;
}

std::vector<std::vector<Scalar>> pts(std::vector<std::vector<long>> rows) { return ints(std::move(rows)); }

}  // namespace

TEST(Metric, MatrixValidation) {
  EXPECT_EQ(metric_from_matrix(ints({{0, 5}, {5, 0}}))(0, 1), 5);
  EXPECT_EQ(code_of([] { metric_from_matrix(ints({{0, 1}, {2, 0}})); }), ErrorCode::kAsymmetricMatrix);
  EXPECT_EQ(code_of([] { metric_from_matrix(ints({{0, 1}, {1, 0}, {1, 1}})); }), ErrorCode::kNotSquare);
  EXPECT_EQ(code_of([] { metric_from_matrix(ints({{1, 1}, {1, 0}})); }), ErrorCode::kNonZeroDiagonal);
  EXPECT_EQ(code_of([] { metric_from_matrix(ints({{0, -1}, {-1, 0}})); }), ErrorCode::kNegativeDistance);
  EXPECT_EQ(code_of([] { metric_from_matrix(ints({{0, 0}, {0, 0}})); }), ErrorCode::kZeroOffDiagonal);
}

TEST(Metric, TriangleViolationWitness) {
  try {
    metric_from_matrix(ints({{0, 1, 3}, {1, 0, 1}, {3, 1, 0}}));
    FAIL() << "accepted a triangle violation";
  } catch (const TriangleViolationError& e) {
    EXPECT_EQ(e.i(), 0);
    EXPECT_EQ(e.k(), 2);
    EXPECT_EQ(e.j(), 1);
  }
}

TEST(Metric, FromPoints) {
  FiniteMetric l1 = metric_from_points(pts({{0, 0}, {1, 0}, {0, 2}}), PointNorm::kL1);
  EXPECT_EQ(l1(0, 1), 1);
  EXPECT_EQ(l1(0, 2), 2);
  EXPECT_EQ(l1(1, 2), 3);
  FiniteMetric inf = metric_from_points(pts({{0, 0}, {1, 2}}), PointNorm::kLinf);
  EXPECT_EQ(inf(0, 1), 2);
  EXPECT_EQ(code_of([] { metric_from_points(pts({{0}, {0}}), PointNorm::kL1); }), ErrorCode::kDuplicatePoint);
  EXPECT_EQ(code_of([] { metric_from_points(pts({{0}, {1, 2}}), PointNorm::kL1); }), ErrorCode::kDimensionMismatch);
}

TEST(Metric, GeodesicGraphKeepsDistances) {
  FiniteMetric two = metric_from_matrix(ints({{0, 7}, {7, 0}}));
  EXPECT_EQ(complete_graph_metric(two).matrix(), two.matrix());
  testkit::Rng rng(3);
  FiniteMetric m = testkit::random_metric(rng, 5);
  EXPECT_EQ(complete_graph_metric(m).matrix(), m.matrix());
}

TEST(Metric, RandomMetricsSatisfyTriangle) {
  testkit::Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    int n = rng.uniform(1, 7);
    FiniteMetric m = testkit::random_metric(rng, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) EXPECT_LE(m(i, k), m(i, j) + m(j, k));
      }
    }
  }
}

TEST(Metric, L1PointsMatchCoordinateGaps) {
  testkit::Rng rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    int n = rng.uniform(2, 6), dim = rng.uniform(1, 3);
    std::vector<std::vector<Scalar>> coords;
    std::set<std::vector<Scalar>> distinct;
    while (static_cast<int>(coords.size()) < n) {
      std::vector<Scalar> p;
      for (int k = 0; k < dim; ++k) p.emplace_back(rng.uniform(-5, 5));
      if (distinct.insert(p).second) coords.push_back(p);
    }
    FiniteMetric m = metric_from_points(coords, PointNorm::kL1);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        Scalar gap = 0;
        for (int k = 0; k < dim; ++k) gap += abs_value(coords[i][k] - coords[j][k]);
        EXPECT_EQ(m(i, j), gap);
      }
    }
  }
}

TEST(Instance, Validation) {
  FiniteMetric m = metric_from_matrix(ints({{0, 5}, {5, 0}}));
  GroupSpec z({FactorSpec::Int()});
  EXPECT_EQ(code_of([&] { Instance(m, z, {elem({1}), elem({1})}); }), ErrorCode::kNonZeroSum);
  EXPECT_EQ(code_of([&] { Instance(m, z, {elem({1})}); }), ErrorCode::kShapeMismatch);
  EXPECT_EQ(Instance(m, z, {elem({2}), elem({-2})}).size(), 2);
}

TEST(Metric, RestrictAndScale) {
  FiniteMetric m = metric_from_matrix(ints({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}));
  FiniteMetric r = m.restrict_to({0, 2});
  EXPECT_EQ(r.size(), 2);
  EXPECT_EQ(r(0, 1), 2);
  EXPECT_EQ(m.scaled(Scalar(1, 2))(0, 2), 1);
}
