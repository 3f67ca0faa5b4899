#ifndef GCOT_JSON_IO_HPP_
#define GCOT_JSON_IO_HPP_

// JSON encodings for groups, elements, metrics, instances, plans, chains and
// trees. Scalars are written as exact rational strings.

#include <json.hpp>

#include <string>
#include <vector>

#include "gcot/calibration.hpp"
#include "gcot/chain.hpp"
#include "gcot/error.hpp"
#include "gcot/group.hpp"
#include "gcot/metric.hpp"
#include "gcot/plan.hpp"
#include "gcot/rational.hpp"

namespace gcot {

using Json = nlohmann::json;

inline Scalar scalar_from_json(const Json& j) {
  if (j.is_string()) return parse_scalar(j.get<std::string>());
  if (j.is_number_integer()) return Scalar(j.get<long>());
  throw Error(ErrorCode::kInvalidInput, "expected a rational string or integer, got " + j.dump());
}

inline Json scalar_to_json(const Scalar& x) { return to_string(x); }

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::kInvalidInput, std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

inline GroupSpec group_from_json(const Json& j) {
  std::vector<FactorSpec> factors;
  const Json& fs = field(j, "factors");
  if (!fs.is_array()) throw Error(ErrorCode::kInvalidInput, "\"factors\" must be an array");
  for (const Json& f : fs) {
    std::string kind = field(f, "kind").get<std::string>();
    Scalar w = f.contains("weight") ? scalar_from_json(f.at("weight")) : Scalar(1);
    if (kind == "Z") {
      factors.push_back(FactorSpec::Int(w));
    } else if (kind == "R") {
      factors.push_back(FactorSpec::Real(w));
    } else if (kind == "Z2") {
      factors.push_back(FactorSpec::Z2(w));
    } else if (kind == "Zmod") {
      std::vector<int> moduli = field(f, "moduli").get<std::vector<int>>();
      std::vector<Scalar> table;
      for (const Json& t : field(f, "norm_table")) table.push_back(scalar_from_json(t));
      factors.push_back(FactorSpec::Mod(std::move(moduli), std::move(table)));
    } else {
      throw Error(ErrorCode::kInvalidInput, "unknown factor kind \"" + kind + "\"");
    }
  }
  GroupSpec spec(std::move(factors));
  require_valid_norm(spec);
  return spec;
}

inline Json group_to_json(const GroupSpec& spec) {
  Json fs = Json::array();
  for (const FactorSpec& f : spec.factors()) {
    Json o;
    switch (f.kind) {
      case FactorKind::kInt:
        o = {{"kind", "Z"}, {"weight", to_string(f.weight)}};
        break;
      case FactorKind::kReal:
        o = {{"kind", "R"}, {"weight", to_string(f.weight)}};
        break;
      case FactorKind::kMod: {
        Json table = Json::array();
        for (const Scalar& t : f.norm_table) table.push_back(to_string(t));
        o = {{"kind", "Zmod"}, {"moduli", f.moduli}, {"norm_table", table}};
        break;
      }
    }
    fs.push_back(o);
  }
  return {{"factors", fs}};
}

inline GroupElement element_from_json(const GroupSpec& spec, const Json& j) {
  GroupElement x;
  if (j.is_array()) {
    for (const Json& c : j) x.coords.push_back(scalar_from_json(c));
  } else {
    x.coords.push_back(scalar_from_json(j));
  }
  require_conforms(spec, x);
  return x;
}

inline Json element_to_json(const GroupElement& x) {
  Json a = Json::array();
  for (const Scalar& c : x.coords) a.push_back(to_string(c));
  return a;
}

inline std::vector<GroupElement> elements_from_json(const GroupSpec& spec, const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::kInvalidInput, "expected an array of elements");
  std::vector<GroupElement> out;
  for (const Json& e : j) out.push_back(element_from_json(spec, e));
  return out;
}

inline Json elements_to_json(const std::vector<GroupElement>& xs) {
  Json a = Json::array();
  for (const GroupElement& x : xs) a.push_back(element_to_json(x));
  return a;
}

inline FiniteMetric metric_from_json(const Json& j) {
  std::string kind = field(j, "kind").get<std::string>();
  if (kind == "matrix") {
    Matrix d;
    for (const Json& row : field(j, "d")) {
      std::vector<Scalar> r;
      for (const Json& x : row) r.push_back(scalar_from_json(x));
      d.push_back(std::move(r));
    }
    return metric_from_matrix(std::move(d));
  }
  if (kind == "points") {
    std::string p = j.value("p", "l1");
    PointNorm pn;
    if (p == "l1") {
      pn = PointNorm::kL1;
    } else if (p == "linf") {
      pn = PointNorm::kLinf;
    } else {
      throw Error(ErrorCode::kInvalidInput, "unknown point norm \"" + p + "\"");
    }
    std::vector<std::vector<Scalar>> coords;
    for (const Json& row : field(j, "coords")) {
      std::vector<Scalar> r;
      for (const Json& x : row) r.push_back(scalar_from_json(x));
      coords.push_back(std::move(r));
    }
    return metric_from_points(coords, pn);
  }
  throw Error(ErrorCode::kInvalidInput, "unknown metric kind \"" + kind + "\"");
}

inline Json metric_to_json(const FiniteMetric& m) {
  Json d = Json::array();
  for (const auto& row : m.matrix()) {
    Json r = Json::array();
    for (const Scalar& x : row) r.push_back(to_string(x));
    d.push_back(r);
  }
  return {{"kind", "matrix"}, {"d", d}};
}

inline Instance instance_from_json(const Json& j) {
  GroupSpec group = group_from_json(field(j, "group"));
  return Instance(metric_from_json(field(j, "metric")), group,
                  elements_from_json(group, field(j, "coefficients")));
}

inline Json instance_to_json(const Instance& inst) {
  return {{"group", group_to_json(inst.group())},
          {"metric", metric_to_json(inst.metric())},
          {"coefficients", elements_to_json(inst.coeffs())}};
}

inline Json plan_to_json(const TransportPlan& plan) {
  Json entries = Json::array();
  for (const auto& row : plan.entries) entries.push_back(elements_to_json(row));
  Json j = {{"entries", entries}, {"method", plan.method}};
  j["cost"] = plan.cost ? Json(to_string(*plan.cost)) : Json(nullptr);
  return j;
}

inline TransportPlan plan_from_json(const GroupSpec& group, const Json& j) {
  TransportPlan plan;
  plan.group = group;
  for (const Json& row : field(j, "entries")) plan.entries.push_back(elements_from_json(group, row));
  if (j.contains("cost") && !j.at("cost").is_null()) plan.cost = scalar_from_json(j.at("cost"));
  plan.method = j.value("method", "");
  return plan;
}

inline Json chain_to_json(const PolyChain1& s) {
  Json edges = Json::array();
  for (const ChainEdge& e : s.edges()) {
    edges.push_back({{"u", e.u}, {"v", e.v}, {"coeff", element_to_json(e.coeff)}});
  }
  return {{"group", group_to_json(s.group())},
          {"metric", metric_to_json(s.metric())},
          {"boundary_set", std::vector<int>(s.boundary_set().begin(), s.boundary_set().end())},
          {"edges", edges}};
}

inline PolyChain1 chain_from_json(const Json& j) {
  GroupSpec group = group_from_json(field(j, "group"));
  std::vector<ChainEdge> edges;
  for (const Json& e : field(j, "edges")) {
    edges.push_back({field(e, "u").get<int>(), field(e, "v").get<int>(), element_from_json(group, field(e, "coeff"))});
  }
  return PolyChain1(metric_from_json(field(j, "metric")), group,
                    field(j, "boundary_set").get<std::vector<int>>(), edges);
}

inline Json chain0_to_json(const Chain0& c) {
  Json a = Json::array();
  for (const auto& [v, g] : c) a.push_back({{"vertex", v}, {"coeff", element_to_json(g)}});
  return a;
}

inline Json tree_to_json(const Tree& t) {
  Json edges = Json::array();
  for (const TreeEdge& e : t.edges()) edges.push_back({{"u", e.u}, {"v", e.v}, {"length", to_string(e.length)}});
  return {{"vertices", t.vertex_count()}, {"edges", edges}};
}

inline Tree tree_from_json(const Json& j) {
  std::vector<TreeEdge> edges;
  for (const Json& e : field(j, "edges")) {
    edges.push_back({field(e, "u").get<int>(), field(e, "v").get<int>(), scalar_from_json(field(e, "length"))});
  }
  return Tree::FromEdges(field(j, "vertices").get<int>(), std::move(edges));
}

// {"factors":[{"tree":{...},"map":[...]}, ...]}, one entry per group factor.
inline std::vector<FactorCalibration> calibrations_from_json(const Json& j) {
  std::vector<FactorCalibration> out;
  for (const Json& f : field(j, "factors")) {
    out.push_back({tree_from_json(field(f, "tree")), field(f, "map").get<std::vector<int>>()});
  }
  return out;
}

}  // namespace gcot

#endif  // GCOT_JSON_IO_HPP_
