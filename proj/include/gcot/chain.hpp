#ifndef GCOT_CHAIN_HPP_
#define GCOT_CHAIN_HPP_

// Polyhedral 1-chains on finite metric spaces and the interior-vertex
// elimination loop: each interior star is replaced by edges between its
// neighbors, routed by a nonbranching plan, which never increases mass.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gcot/error.hpp"
#include "gcot/group.hpp"
#include "gcot/metric.hpp"
#include "gcot/nbp.hpp"
#include "gcot/plan.hpp"

namespace gcot {

// Edge u -> v with u < v; zero coefficients are never stored.
struct ChainEdge {
  int u = 0;
  int v = 0;
  GroupElement coeff;

  friend bool operator==(const ChainEdge&, const ChainEdge&) = default;
};

using Chain0 = std::map<int, GroupElement>;

class PolyChain1 {
 public:
  PolyChain1(FiniteMetric metric, GroupSpec group, std::vector<int> boundary_set,
             const std::vector<ChainEdge>& edges = {})
      : metric_(std::move(metric)), group_(std::move(group)) {
    for (int b : boundary_set) {
      check_vertex(b);
      boundary_set_.insert(b);
    }
    for (const ChainEdge& e : edges) add_edge(e.u, e.v, e.coeff);
  }

  const FiniteMetric& metric() const { return metric_; }
  const GroupSpec& group() const { return group_; }
  const std::set<int>& boundary_set() const { return boundary_set_; }

  std::vector<ChainEdge> edges() const {
    std::vector<ChainEdge> out;
    for (const auto& [key, c] : edges_) out.push_back({key.first, key.second, c});
    return out;
  }
  std::size_t edge_count() const { return edges_.size(); }

  // Adds c on the edge oriented u -> v, merging with an existing edge.
  void add_edge(int u, int v, const GroupElement& c) {
    check_vertex(u);
    check_vertex(v);
    require_conforms(group_, c);
    if (u == v) throw Error(ErrorCode::kInvalidInput, "edge endpoints coincide at " + std::to_string(u));
    GroupElement oriented = u < v ? c : neg(group_, c);
    std::pair<int, int> key{std::min(u, v), std::max(u, v)};
    auto it = edges_.find(key);
    if (it == edges_.end()) {
      if (!is_zero(oriented)) edges_.emplace(key, oriented);
      return;
    }
    it->second = add(group_, it->second, oriented);
    if (is_zero(it->second)) edges_.erase(it);
  }

  // Coefficient of the edge oriented from a to b (zero when absent).
  GroupElement coeff_from(int a, int b) const {
    auto it = edges_.find({std::min(a, b), std::max(a, b)});
    if (it == edges_.end()) return zero(group_);
    return a < b ? it->second : neg(group_, it->second);
  }

  std::vector<int> neighbors(int v) const {
    std::vector<int> out;
    for (const auto& [key, c] : edges_) {
      if (key.first == v) out.push_back(key.second);
      if (key.second == v) out.push_back(key.first);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  void remove_star(int v) {
    for (auto it = edges_.begin(); it != edges_.end();) {
      if (it->first.first == v || it->first.second == v) {
        it = edges_.erase(it);
      } else {
        ++it;
      }
    }
  }

  friend bool operator==(const PolyChain1& a, const PolyChain1& b) {
    return a.metric_ == b.metric_ && a.group_ == b.group_ && a.boundary_set_ == b.boundary_set_ &&
           a.edges_ == b.edges_;
  }

 private:
  void check_vertex(int v) const {
    if (v < 0 || v >= metric_.size()) {
      throw Error(ErrorCode::kInvalidInput, "vertex " + std::to_string(v) + " out of range");
    }
  }

  FiniteMetric metric_;
  GroupSpec group_;
  std::set<int> boundary_set_;
  std::map<std::pair<int, int>, GroupElement> edges_;
};

// +c at the head, -c at the tail of each edge; zero entries dropped.
inline Chain0 boundary(const PolyChain1& s) {
  std::map<int, GroupElement> acc;
  auto bump = [&](int v, const GroupElement& c) {
    auto it = acc.find(v);
    if (it == acc.end()) {
      acc.emplace(v, c);
    } else {
      it->second = add(s.group(), it->second, c);
    }
  };
  for (const ChainEdge& e : s.edges()) {
    bump(e.v, e.coeff);
    bump(e.u, neg(s.group(), e.coeff));
  }
  Chain0 out;
  for (auto& [v, c] : acc) {
    if (!is_zero(c)) out.emplace(v, std::move(c));
  }
  return out;
}

inline Scalar mass(const PolyChain1& s) {
  Scalar total = 0;
  for (const ChainEdge& e : s.edges()) total += norm(s.group(), e.coeff) * s.metric()(e.u, e.v);
  return total;
}

// Star at v: neighbors in ascending order and the coefficients a_i of the
// edges oriented from v to each neighbor.
struct Star {
  int center = 0;
  std::vector<int> neighbors;
  std::vector<GroupElement> coeffs;
};

inline Star star_at(const PolyChain1& s, int v) {
  Star st;
  st.center = v;
  st.neighbors = s.neighbors(v);
  for (int w : st.neighbors) st.coeffs.push_back(s.coeff_from(v, w));
  return st;
}

// Replaces the star at v by sum_{i<j} a_ij [v_j, v_i], where (a_ij) is a
// nonbranching plan for the star coefficients.
inline PolyChain1 eliminate_vertex(const PolyChain1& s, int v, const TransportPlan& plan) {
  if (s.boundary_set().count(v)) {
    throw Error(ErrorCode::kVertexOnBoundary, "vertex " + std::to_string(v) + " is in the boundary set");
  }
  Star st = star_at(s, v);
  std::string why = feasibility_error(plan, s.group(), st.coeffs);
  if (!why.empty()) throw Error(ErrorCode::kPlanMismatch, "plan does not fit the star at " +
                                                              std::to_string(v) + ": " + why);
  NbpReport report = check_nbp(plan, s.group(), st.coeffs);
  if (!report.nbp) {
    const ViolatedRow& r = report.violated_rows.front();
    throw Error(ErrorCode::kPlanNotNbp, "row " + std::to_string(r.row) + ": |g_i| = " +
                                            to_string(r.coeff_norm) + " != " + to_string(r.split_norm));
  }
  PolyChain1 out = s;
  out.remove_star(v);
  const int l = static_cast<int>(st.neighbors.size());
  for (int i = 0; i < l; ++i) {
    for (int j = i + 1; j < l; ++j) {
      const GroupElement& a = plan.at(i, j);
      if (!is_zero(a)) out.add_edge(st.neighbors[j], st.neighbors[i], a);
    }
  }
  return out;
}

class NoNbpPlanForStarError : public Error {
 public:
  NoNbpPlanForStarError(int vertex, std::vector<GroupElement> coeffs, const std::string& what)
      : Error(ErrorCode::kNoNbpPlanForStar, what), vertex_(vertex), coeffs_(std::move(coeffs)) {}
  int vertex() const { return vertex_; }
  const std::vector<GroupElement>& coeffs() const { return coeffs_; }

 private:
  int vertex_;
  std::vector<GroupElement> coeffs_;
};

struct SimplifyStep {
  int vertex = 0;
  Scalar mass_before;
  Scalar mass_after;
  std::string method;  // construct | search
};

struct SimplifyResult {
  PolyChain1 chain;
  std::vector<SimplifyStep> trace;
};

namespace detail {

inline bool construct_supported(const GroupSpec& g) {
  for (const FactorSpec& f : g.factors()) {
    if (f.kind == FactorKind::kMod && !f.is_parity()) return false;
  }
  return true;
}

}  // namespace detail

// Eliminates every interior vertex carrying edges, highest index first.
inline SimplifyResult simplify(const PolyChain1& s, const NbpSearchOptions& search = {}) {
  for (const auto& [v, c] : boundary(s)) {
    if (!s.boundary_set().count(v)) {
      throw Error(ErrorCode::kBoundaryOutsideSet,
                  "boundary is nonzero at vertex " + std::to_string(v) + " outside the boundary set");
    }
  }
  SimplifyResult result{s, {}};
  for (int v = s.metric().size() - 1; v >= 0; --v) {
    if (s.boundary_set().count(v)) continue;
    Star st = star_at(result.chain, v);
    if (st.neighbors.empty()) continue;
    std::optional<TransportPlan> plan;
    std::string method;
    if (detail::construct_supported(s.group())) {
      plan = construct_nbp(s.group(), st.coeffs);
      method = "construct";
    } else {
      if (!s.group().is_finite()) {
        throw Error(ErrorCode::kUnsupportedFactor, "stars over infinite groups need Z, R or Z_2 factors");
      }
      NbpSearchResult found = search_nbp(s.group(), st.coeffs, search);
      if (!found.plan) {
        std::string labels;
        for (const GroupElement& c : st.coeffs) labels += (labels.empty() ? "" : ", ") + element_label(c);
        throw NoNbpPlanForStarError(v, st.coeffs,
                                    "no nonbranching plan for the star at " + std::to_string(v) +
                                        " with coefficients " + labels + " (" +
                                        std::to_string(found.search_space) + " assignments refuted)");
      }
      plan = std::move(found.plan);
      method = "search";
    }
    SimplifyStep step{v, mass(result.chain), 0, method};
    result.chain = eliminate_vertex(result.chain, v, *plan);
    step.mass_after = mass(result.chain);
    result.trace.push_back(std::move(step));
  }
  return result;
}

// Reads a chain supported on the boundary set as a transport plan over the
// listed boundary points: g_{v,u} = c for an edge u -> v, so row sums equal
// the boundary coefficients.
inline TransportPlan chain_to_plan(const PolyChain1& s, const std::vector<int>& points) {
  std::map<int, int> slot;
  for (int i = 0; i < static_cast<int>(points.size()); ++i) slot[points[i]] = i;
  TransportPlan plan = zero_plan(s.group(), static_cast<int>(points.size()));
  for (const ChainEdge& e : s.edges()) {
    auto a = slot.find(e.u), b = slot.find(e.v);
    if (a == slot.end() || b == slot.end()) {
      throw Error(ErrorCode::kInvalidInput, "edge " + std::to_string(e.u) + "-" + std::to_string(e.v) +
                                                " leaves the listed points");
    }
    plan.set(b->second, a->second, add(s.group(), plan.at(b->second, a->second), e.coeff));
  }
  plan.method = "chain";
  return plan;
}

}  // namespace gcot

#endif  // GCOT_CHAIN_HPP_
