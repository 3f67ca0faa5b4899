#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "gcot/commands.hpp"
#include "gcot/json_io.hpp"
#include "oracles.hpp"

using namespace gcot;

namespace {

Json sample(const std::string& name) {
  std::ifstream in(std::string(GCOT_SAMPLES_DIR) + "/" + name);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), name);
}

}  // namespace

TEST(JsonIo, Scalars) {
  EXPECT_EQ(scalar_from_json(Json("3/6")), testkit::ratio(1, 2));
  EXPECT_EQ(scalar_from_json(Json(-4)), -4);
  EXPECT_EQ(scalar_to_json(testkit::ratio(-6, 4)), Json("-3/2"));
  EXPECT_THROW(scalar_from_json(Json(0.5)), Error);
  EXPECT_THROW(scalar_from_json(Json("x")), Error);
}

TEST(JsonIo, GroupRoundTrip) {
  testkit::Rng rng(113);
  for (int trial = 0; trial < 30; ++trial) {
    GroupSpec spec = trial % 2 ? testkit::random_finite_group(rng) : testkit::random_lattice_group(rng);
    EXPECT_EQ(group_from_json(group_to_json(spec)), spec);
    GroupElement x = testkit::random_element(rng, spec);
    EXPECT_EQ(element_from_json(spec, element_to_json(x)), x);
  }
}

TEST(JsonIo, GroupErrors) {
  EXPECT_THROW(group_from_json(Json::parse(R"({"factors": [{"kind": "Q"}]})")), Error);
  EXPECT_THROW(group_from_json(Json::parse(R"({"nope": 1})")), Error);
  // |2| exceeds |1| + |1|.
  EXPECT_THROW(group_from_json(Json::parse(R"({"factors": [{"kind": "Zmod", "moduli": [4],
                                              "norm_table": ["0", "1", "3", "1"]}]})")),
               Error);
  GroupSpec z({FactorSpec::Int()});
  EXPECT_THROW(element_from_json(z, Json::parse(R"(["1", "2"])")), Error);
}

TEST(JsonIo, InstanceAndPlanRoundTrip) {
  testkit::Rng rng(127);
  for (int trial = 0; trial < 30; ++trial) {
    GroupSpec spec = testkit::random_finite_group(rng);
    int n = rng.uniform(2, 4);
    Instance inst(testkit::random_metric(rng, n), spec, testkit::random_zero_sum(rng, spec, n));
    Instance back = instance_from_json(instance_to_json(inst));
    EXPECT_EQ(back.metric(), inst.metric());
    EXPECT_EQ(back.group(), inst.group());
    EXPECT_EQ(back.coeffs(), inst.coeffs());

    TransportPlan plan = zero_plan(spec, n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) plan.set(i, j, testkit::random_element(rng, spec));
    }
    EXPECT_EQ(plan_from_json(spec, plan_to_json(plan)).entries, plan.entries);
  }
}

TEST(JsonIo, ChainAndTreeRoundTrip) {
  testkit::Rng rng(131);
  for (int trial = 0; trial < 20; ++trial) {
    GroupSpec spec = testkit::random_lattice_group(rng);
    PolyChain1 s = testkit::random_chain(rng, spec, rng.uniform(2, 3), rng.uniform(0, 3));
    EXPECT_EQ(chain_from_json(chain_to_json(s)), s);
  }
  Tree t = Tree::FromEdges(3, {{0, 1, testkit::ratio(1, 2)}, {1, 2, Scalar(4)}});
  Tree back = tree_from_json(tree_to_json(t));
  EXPECT_EQ(back.vertex_count(), 3);
  EXPECT_EQ(back.distances_from(0), t.distances_from(0));
}

TEST(JsonIo, MetricKinds) {
  Json pts = Json::parse(R"({"kind": "points", "p": "linf", "coords": [["0", "0"], ["1", "3"]]})");
  EXPECT_EQ(metric_from_json(pts)(0, 1), 3);
  EXPECT_THROW(metric_from_json(Json::parse(R"({"kind": "points", "p": "l2", "coords": [["0"], ["1"]]})")), Error);
  EXPECT_THROW(metric_from_json(Json::parse(R"({"kind": "matrix", "d": [["0", "1"], ["2", "0"]]})")), Error);
}

TEST(JsonIo, ParseErrors) {
  try {
    parse_json_text("{\"a\": [", "buffer");
    FAIL() << "truncated text parsed";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidInput);
    EXPECT_NE(std::string(e.what()).find("parse error"), std::string::npos);
  }
  EXPECT_THROW(sample("malformed.json"), Error);
}

TEST(JsonIo, SamplesLoad) {
  for (const char* name : {"z2_square.json", "z_two_point.json", "z_three_point.json", "z2_line.json"}) {
    EXPECT_NO_THROW(instance_from_json(sample(name))) << name;
  }
  GroupSpec z4 = group_from_json(sample("z4.json"));
  EXPECT_EQ(z4.order(), 4);
  Json four = sample("z4_four_ones.json");
  EXPECT_EQ(elements_from_json(z4, four.at("coefficients")).size(), 4u);
  TransportPlan star = plan_from_json(z4, sample("z4_star_plan.json"));
  EXPECT_EQ(star.at(3, 0), elem({3}));
  PolyChain1 y = chain_from_json(sample("y_chain.json"));
  EXPECT_EQ(mass(y), 6);
  EXPECT_EQ(calibrations_from_json(sample("z2_matching_trees.json")).size(), 1u);
}
