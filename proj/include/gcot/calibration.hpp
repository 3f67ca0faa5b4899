#ifndef GCOT_CALIBRATION_HPP_
#define GCOT_CALIBRATION_HPP_

// Lower bounds on transport cost: Lipschitz potentials for Z / R factors and
// 1-Lipschitz maps into trees, where fillings are unique and computable.

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "gcot/chain.hpp"
#include "gcot/error.hpp"
#include "gcot/group.hpp"
#include "gcot/lp.hpp"
#include "gcot/metric.hpp"
#include "gcot/nbp.hpp"
#include "gcot/plan.hpp"
#include "gcot/solver.hpp"

namespace gcot {

struct TreeEdge {
  int u = 0;
  int v = 0;
  Scalar length;
};

class Tree {
 public:
  Tree() : vertex_count_(1) {}

  static Tree FromEdges(int vertex_count, std::vector<TreeEdge> edges) {
    if (vertex_count < 1) throw Error(ErrorCode::kInvalidInput, "tree needs a vertex");
    if (static_cast<int>(edges.size()) != vertex_count - 1) {
      throw Error(ErrorCode::kInvalidInput, "tree on " + std::to_string(vertex_count) + " vertices needs " +
                                                std::to_string(vertex_count - 1) + " edges");
    }
    Tree t;
    t.vertex_count_ = vertex_count;
    t.adj_.assign(vertex_count, {});
    for (const TreeEdge& e : edges) {
      if (e.u < 0 || e.v < 0 || e.u >= vertex_count || e.v >= vertex_count || e.u == e.v) {
        throw Error(ErrorCode::kInvalidInput, "bad tree edge " + std::to_string(e.u) + "-" + std::to_string(e.v));
      }
      if (e.length <= 0) throw Error(ErrorCode::kInvalidInput, "tree edge lengths must be positive");
      t.adj_[e.u].push_back({e.v, e.length});
      t.adj_[e.v].push_back({e.u, e.length});
    }
    t.edges_ = std::move(edges);
    // n - 1 edges and connected means acyclic.
    std::vector<bool> seen(vertex_count, false);
    std::vector<int> stack = {0};
    seen[0] = true;
    int reached = 1;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (const auto& [y, len] : t.adj_[x]) {
        if (!seen[y]) {
          seen[y] = true;
          ++reached;
          stack.push_back(y);
        }
      }
    }
    if (reached != vertex_count) throw Error(ErrorCode::kInvalidInput, "tree is not connected");
    return t;
  }

  int vertex_count() const { return vertex_count_; }
  const std::vector<TreeEdge>& edges() const { return edges_; }
  const std::vector<std::pair<int, Scalar>>& adjacent(int v) const { return adj_.at(v); }

  // Path lengths from src to every vertex.
  std::vector<Scalar> distances_from(int src) const {
    std::vector<Scalar> dist(vertex_count_);
    std::vector<bool> seen(vertex_count_, false);
    std::vector<int> stack = {src};
    seen[src] = true;
    dist[src] = 0;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (const auto& [y, len] : adj_[x]) {
        if (!seen[y]) {
          seen[y] = true;
          dist[y] = dist[x] + len;
          stack.push_back(y);
        }
      }
    }
    return dist;
  }

  FiniteMetric path_metric() const {
    Matrix d;
    for (int v = 0; v < vertex_count_; ++v) d.push_back(distances_from(v));
    return FiniteMetric::FromMatrix(std::move(d));
  }

 private:
  int vertex_count_;
  std::vector<TreeEdge> edges_;
  std::vector<std::vector<std::pair<int, Scalar>>> adj_ = {{}};
};

// Image vertex of each instance point.
using TreeMap = std::vector<int>;

struct LipschitzCheck {
  bool ok = true;
  int i = -1, j = -1;
  Scalar tree_distance;
  Scalar metric_distance;
};

inline LipschitzCheck verify_tree_map(const FiniteMetric& metric, const Tree& tree, const TreeMap& map) {
  if (static_cast<int>(map.size()) != metric.size()) {
    throw Error(ErrorCode::kShapeMismatch, "map covers " + std::to_string(map.size()) + " of " +
                                               std::to_string(metric.size()) + " points");
  }
  for (int v : map) {
    if (v < 0 || v >= tree.vertex_count()) throw Error(ErrorCode::kInvalidInput, "map leaves the tree");
  }
  for (int i = 0; i < metric.size(); ++i) {
    std::vector<Scalar> dist = tree.distances_from(map[i]);
    for (int j = i + 1; j < metric.size(); ++j) {
      if (dist[map[j]] > metric(i, j)) return {false, i, j, dist[map[j]], metric(i, j)};
    }
  }
  return {};
}

struct TreeFilling {
  PolyChain1 chain;
  Scalar mass;
};

// The unique filling: with the tree rooted at 0, the edge from a parent to
// its child carries the coefficient sum of the child's subtree.
inline TreeFilling tree_fill(const Tree& tree, const Chain0& chain, const GroupSpec& group) {
  std::vector<GroupElement> at(tree.vertex_count(), zero(group));
  std::vector<GroupElement> values;
  for (const auto& [v, c] : chain) {
    if (v < 0 || v >= tree.vertex_count()) throw Error(ErrorCode::kInvalidInput, "chain leaves the tree");
    require_conforms(group, c);
    at[v] = add(group, at[v], c);
    values.push_back(c);
  }
  if (!is_zero(sum_elements(group, values))) {
    throw Error(ErrorCode::kNonZeroSum, "0-chain coefficients do not sum to zero");
  }
  std::vector<int> parent(tree.vertex_count(), -1), order;
  std::vector<Scalar> up_length(tree.vertex_count());
  std::vector<int> stack = {0};
  parent[0] = 0;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    order.push_back(x);
    for (const auto& [y, len] : tree.adjacent(x)) {
      if (parent[y] < 0) {
        parent[y] = x;
        up_length[y] = len;
        stack.push_back(y);
      }
    }
  }
  std::vector<int> boundary_set;
  for (const auto& [v, c] : chain) boundary_set.push_back(v);
  TreeFilling fill{PolyChain1(tree.path_metric(), group, boundary_set), 0};
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int x = *it;
    if (x == 0) continue;
    const GroupElement& s = at[x];
    if (!is_zero(s)) {
      fill.chain.add_edge(parent[x], x, s);
      fill.mass += norm(group, s) * up_length[x];
    }
    at[parent[x]] = add(group, at[parent[x]], s);
  }
  return fill;
}

struct GluedTree {
  Tree tree;
  std::vector<int> offsets;  // vertex k of tree i becomes offsets[i] + k
  int hub = 0;
};

// A new hub joined to vertex 0 of every tree by an edge of the given length.
inline GluedTree star_glue(const std::vector<Tree>& trees, const Scalar& separation) {
  if (separation <= 0) throw Error(ErrorCode::kInvalidInput, "separation must be positive");
  GluedTree g;
  std::vector<TreeEdge> edges;
  int next = 0;
  for (const Tree& t : trees) {
    g.offsets.push_back(next);
    for (const TreeEdge& e : t.edges()) edges.push_back({e.u + next, e.v + next, e.length});
    next += t.vertex_count();
  }
  g.hub = next;
  for (int off : g.offsets) edges.push_back({g.hub, off, separation});
  g.tree = Tree::FromEdges(next + 1, std::move(edges));
  return g;
}

struct DualCertificate {
  std::vector<Scalar> potentials;  // last point pinned to 0
  Scalar value;
};

// max sum_i c_i f_i over potentials with |f_i - f_j| <= w d(i, j), for a
// single Z or R factor of weight w.
inline DualCertificate kantorovich_dual(const Instance& inst) {
  if (inst.group().factor_count() != 1 || inst.group().factor(0).kind == FactorKind::kMod) {
    throw Error(ErrorCode::kUnsupportedFactor, "dual potentials need a single Z or R factor");
  }
  const int n = inst.size();
  DualCertificate cert;
  cert.potentials.assign(n, Scalar(0));
  cert.value = 0;
  if (n <= 1) return cert;
  const Scalar& w = inst.group().factor(0).weight;
  // f_i = p_i - q_i for i < n-1; one slack per ordered pair.
  const int free_vars = n - 1;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) pairs.emplace_back(i, j);
    }
  }
  const std::size_t cols = 2 * free_vars + pairs.size();
  std::vector<std::vector<Scalar>> a(pairs.size(), std::vector<Scalar>(cols, Scalar(0)));
  std::vector<Scalar> b(pairs.size());
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    auto [i, j] = pairs[r];
    if (i < free_vars) {
      a[r][i] += 1;
      a[r][free_vars + i] -= 1;
    }
    if (j < free_vars) {
      a[r][j] -= 1;
      a[r][free_vars + j] += 1;
    }
    a[r][2 * free_vars + r] = 1;
    b[r] = w * inst.metric()(i, j);
  }
  std::vector<Scalar> c(cols, Scalar(0));
  for (int i = 0; i < free_vars; ++i) {
    const Scalar& g = inst.coeffs()[i].coords[0];
    c[i] = -g;
    c[free_vars + i] = g;
  }
  LpResult lp = solve_lp(a, b, c);
  if (lp.status != LpStatus::kOptimal) {
    throw Error(ErrorCode::kInvalidInput, "dual program has no optimum");
  }
  for (int i = 0; i < free_vars; ++i) cert.potentials[i] = lp.x[i] - lp.x[free_vars + i];
  for (int i = 0; i < n; ++i) cert.value += inst.coeffs()[i].coords[0] * cert.potentials[i];
  return cert;
}

struct IntervalTree {
  Tree tree;
  TreeMap map;
};

// Path through the sorted distinct potential values; point i maps to the
// vertex of its value. 1-Lipschitz whenever the potential is.
inline IntervalTree interval_tree_from_potential(const std::vector<Scalar>& potential) {
  std::vector<Scalar> values = potential;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<TreeEdge> edges;
  for (std::size_t k = 0; k + 1 < values.size(); ++k) {
    edges.push_back({static_cast<int>(k), static_cast<int>(k + 1), values[k + 1] - values[k]});
  }
  IntervalTree out;
  out.tree = Tree::FromEdges(static_cast<int>(std::max<std::size_t>(values.size(), 1)), std::move(edges));
  for (const Scalar& v : potential) {
    out.map.push_back(static_cast<int>(std::lower_bound(values.begin(), values.end(), v) - values.begin()));
  }
  return out;
}

struct FactorCalibration {
  Tree tree;
  TreeMap map;
};

class LipschitzViolationError : public Error {
 public:
  LipschitzViolationError(std::size_t factor, LipschitzCheck check, const std::string& what)
      : Error(ErrorCode::kLipschitzViolation, what), factor_(factor), check_(std::move(check)) {}
  std::size_t factor() const { return factor_; }
  const LipschitzCheck& check() const { return check_; }

 private:
  std::size_t factor_;
  LipschitzCheck check_;
};

struct CalibrationValue {
  Scalar value;
  std::vector<Scalar> per_factor;
  GluedTree glued;
};

// Pushes factor j of the coefficients through map j, glues the trees at a
// hub and fills. Every verified candidate gives a lower bound on the cost.
inline CalibrationValue calibration_value(const Instance& inst, const std::vector<FactorCalibration>& cands) {
  const GroupSpec& group = inst.group();
  if (cands.size() != group.factor_count()) {
    throw Error(ErrorCode::kShapeMismatch, "need one tree per factor");
  }
  std::vector<Tree> trees;
  for (std::size_t f = 0; f < cands.size(); ++f) {
    LipschitzCheck chk = verify_tree_map(inst.metric(), cands[f].tree, cands[f].map);
    if (!chk.ok) {
      throw LipschitzViolationError(f, chk,
                                    "factor " + std::to_string(f) + ": points " + std::to_string(chk.i) +
                                        ", " + std::to_string(chk.j) + " at tree distance " +
                                        to_string(chk.tree_distance) + " > " + to_string(chk.metric_distance));
    }
    trees.push_back(cands[f].tree);
  }
  Scalar separation = 1;
  for (int i = 0; i < inst.size(); ++i) {
    for (int j = i + 1; j < inst.size(); ++j) separation += inst.metric()(i, j);
  }
  CalibrationValue out;
  out.glued = star_glue(trees, separation);
  Chain0 chain;
  for (std::size_t f = 0; f < cands.size(); ++f) {
    Chain0 own;
    for (int i = 0; i < inst.size(); ++i) {
      GroupElement c = embed(group, f, project(group, f, inst.coeffs()[i]));
      for (Chain0* target : {&chain, &own}) {
        int v = out.glued.offsets[f] + cands[f].map[i];
        auto it = target->find(v);
        if (it == target->end()) {
          target->emplace(v, c);
        } else {
          it->second = add(group, it->second, c);
        }
      }
    }
    out.per_factor.push_back(tree_fill(out.glued.tree, own, group).mass);
  }
  out.value = tree_fill(out.glued.tree, chain, group).mass;
  return out;
}

// When the candidates calibrate the instance (lower bound equals the optimal
// cost), every optimal plan splits each coefficient without loss; returns the
// report for the solver's plan.
inline NbpReport converse_check(const Instance& inst, const std::vector<FactorCalibration>& cands,
                                const SolveOptions& opts = {}) {
  CalibrationValue cv = calibration_value(inst, cands);
  TransportPlan plan = solve(inst, opts);
  if (cv.value != *plan.cost) {
    throw Error(ErrorCode::kNotCalibrated, "calibration value " + to_string(cv.value) +
                                               " is below the optimal cost " + to_string(*plan.cost));
  }
  return check_nbp(plan, inst);
}

}  // namespace gcot

#endif  // GCOT_CALIBRATION_HPP_
