#ifndef GCOT_SOLVER_HPP_
#define GCOT_SOLVER_HPP_

// Exact optimal transport with group coefficients.
//
//   solve_brute   exhaustive search over a finite candidate set per entry
//   solve_flow    Z or Q coordinate: successive shortest paths
//   solve_parity  Z_2 coordinate: minimum perfect matching by subset DP
//   solve         per-factor decomposition of a weighted l1 product

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gcot/error.hpp"
#include "gcot/group.hpp"
#include "gcot/metric.hpp"
#include "gcot/plan.hpp"

namespace gcot {

struct SolveOptions {
  // Upper bound on the number of leaves an exhaustive search may visit.
  std::uint64_t budget = 50'000'000;
  // Explicit per-entry candidates for solve_brute; required for R factors.
  std::optional<std::vector<GroupElement>> candidates;
};

// Matching DP limit on the number of odd points.
inline constexpr int kMaxParityPoints = 20;

namespace detail {

// Default candidate set: every element of a finite factor and the interval
// [-S, S] for a Z factor, where S is the sum of |coefficient| in that slot.
inline std::vector<GroupElement> default_candidates(const Instance& inst) {
  const GroupSpec& g = inst.group();
  std::vector<std::vector<GroupElement>> per_factor;
  for (std::size_t f = 0; f < g.factor_count(); ++f) {
    const FactorSpec& fs = g.factor(f);
    std::vector<GroupElement> options;
    switch (fs.kind) {
      case FactorKind::kMod:
        options = enumerate_elements(project_spec(g, f));
        break;
      case FactorKind::kInt: {
        Scalar s = 0;
        for (const GroupElement& c : inst.coeffs()) s += abs_value(c.coords[g.offset(f)]);
        long bound = s.get_num().get_si();
        for (long v = -bound; v <= bound; ++v) options.push_back(elem({v}));
        break;
      }
      case FactorKind::kReal:
        throw Error(ErrorCode::kUnsupportedFactor,
                    "exhaustive search over an R factor needs an explicit candidate set");
    }
    per_factor.push_back(std::move(options));
  }
  std::vector<GroupElement> out{GroupElement{}};
  for (const auto& options : per_factor) {
    std::vector<GroupElement> next;
    next.reserve(out.size() * options.size());
    for (const GroupElement& prefix : out) {
      for (const GroupElement& o : options) {
        GroupElement e = prefix;
        e.coords.insert(e.coords.end(), o.coords.begin(), o.coords.end());
        next.push_back(std::move(e));
      }
    }
    out = std::move(next);
  }
  return out;
}

inline long double search_space(std::size_t candidates, int free_entries) {
  return std::pow(static_cast<long double>(candidates), free_entries);
}

inline std::vector<GroupElement> flatten_upper(const std::vector<std::vector<GroupElement>>& e) {
  std::vector<GroupElement> out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = i + 1; j < e.size(); ++j) out.push_back(e[i][j]);
  }
  return out;
}

// Depth-first search over the entries g_ij, i < j < n-1. The last column is
// forced by the row sums, so every leaf is a feasible plan and every feasible
// plan with entries in the candidate set is a leaf.
class BruteSearch {
 public:
  BruteSearch(const Instance& inst, std::vector<GroupElement> candidates)
      : inst_(inst), g_(inst.group()), n_(inst.size()), candidates_(std::move(candidates)) {
    for (const GroupElement& c : candidates_) {
      require_conforms(g_, c);
      candidate_set_.insert(c);
      candidate_norms_.push_back(norm(g_, c));
    }
    for (int i = 0; i + 2 < n_; ++i) {
      for (int j = i + 1; j + 1 < n_; ++j) pairs_.emplace_back(i, j);
    }
    completes_at_.assign(pairs_.size() + 1, {});
    for (int row = 0; row + 1 < n_; ++row) {
      int last = -1;
      for (std::size_t p = 0; p < pairs_.size(); ++p) {
        if (pairs_[p].first == row || pairs_[p].second == row) last = static_cast<int>(p);
      }
      completes_at_[last + 1].push_back(row);
    }
    entries_.assign(n_, std::vector<GroupElement>(n_, zero(g_)));
  }

  std::size_t free_entries() const { return pairs_.size(); }

  std::optional<TransportPlan> run() {
    Scalar cost = 0;
    if (!close_rows(0, cost)) return finish();
    descend(0, cost);
    return finish();
  }

 private:
  // Fills the forced last-column entries of rows completing at this depth.
  bool close_rows(std::size_t depth, Scalar& cost) {
    for (int row : completes_at_[depth]) {
      GroupElement rest = inst_.coeffs()[row];
      for (int j = 0; j + 1 < n_; ++j) {
        if (j != row) rest = sub(g_, rest, entries_[row][j]);
      }
      if (!candidate_set_.count(rest)) return false;
      entries_[row][n_ - 1] = rest;
      entries_[n_ - 1][row] = neg(g_, rest);
      cost += norm(g_, rest) * inst_.metric()(row, n_ - 1);
    }
    return true;
  }

  void descend(std::size_t depth, const Scalar& cost) {
    if (best_cost_ && cost > *best_cost_) return;
    if (depth == pairs_.size()) {
      leaf(cost);
      return;
    }
    auto [i, j] = pairs_[depth];
    for (std::size_t c = 0; c < candidates_.size(); ++c) {
      entries_[i][j] = candidates_[c];
      entries_[j][i] = neg(g_, candidates_[c]);
      Scalar next = cost + candidate_norms_[c] * inst_.metric()(i, j);
      if (!close_rows(depth + 1, next)) continue;
      descend(depth + 1, next);
    }
  }

  void leaf(const Scalar& cost) {
    if (best_cost_ && cost > *best_cost_) return;
    std::vector<GroupElement> flat = flatten_upper(entries_);
    if (!best_cost_ || cost < *best_cost_ || flat < best_flat_) {
      best_cost_ = cost;
      best_flat_ = std::move(flat);
      best_entries_ = entries_;
    }
  }

  std::optional<TransportPlan> finish() {
    if (!best_cost_) return std::nullopt;
    TransportPlan p;
    p.group = g_;
    p.entries = best_entries_;
    p.cost = *best_cost_;
    p.method = "brute";
    return p;
  }

  const Instance& inst_;
  const GroupSpec& g_;
  int n_;
  std::vector<GroupElement> candidates_;
  std::set<GroupElement> candidate_set_;
  std::vector<Scalar> candidate_norms_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<std::vector<int>> completes_at_;
  std::vector<std::vector<GroupElement>> entries_;
  std::optional<Scalar> best_cost_;
  std::vector<GroupElement> best_flat_;
  std::vector<std::vector<GroupElement>> best_entries_;
};

}  // namespace detail

// Globally minimal plan with every entry in the candidate set (all of G for a
// finite group). Ties are broken by the lexicographically smallest list of
// upper-triangle entries in row-major order.
inline TransportPlan solve_brute(const Instance& inst, const SolveOptions& opts = {}) {
  std::vector<GroupElement> candidates =
      opts.candidates ? *opts.candidates : detail::default_candidates(inst);
  const std::size_t width = candidates.size();
  detail::BruteSearch search(inst, std::move(candidates));
  const int free = static_cast<int>(search.free_entries());
  if (detail::search_space(width, free) > static_cast<long double>(opts.budget)) {
    throw Error(ErrorCode::kBudgetExceeded,
                std::to_string(width) + "^" + std::to_string(free) + " assignments exceed budget " +
                    std::to_string(opts.budget));
  }
  std::optional<TransportPlan> plan = search.run();
  if (!plan) {
    throw Error(ErrorCode::kInvalidInput, "no feasible plan inside the candidate set");
  }
  return *plan;
}

namespace detail {

// Minimum-cost transportation between positive and negative supplies by
// successive shortest paths (Bellman-Ford on the residual graph). Exact over
// the rationals. Returns the flow matrix: flow[p][q] > 0 moves from p to q.
inline std::vector<std::vector<Scalar>> min_cost_transport(const std::vector<Scalar>& supply,
                                                           const FiniteMetric& metric) {
  const int n = static_cast<int>(supply.size());
  std::vector<std::vector<Scalar>> flow(n, std::vector<Scalar>(n, Scalar(0)));
  std::vector<Scalar> excess = supply;
  std::vector<int> sources, sinks;
  for (int i = 0; i < n; ++i) {
    if (supply[i] > 0) sources.push_back(i);
    if (supply[i] < 0) sinks.push_back(i);
  }
  // Node ids: 0 = super source, 1 + i = point i, n + 1 = super sink.
  const int s = 0, t = n + 1, nodes = n + 2;
  struct Arc {
    int from, to;
    Scalar cost;
    int p, q;  // flow[p][q] this arc changes; -1 for super arcs
    bool reverse;
  };
  for (std::size_t iteration = 0;; ++iteration) {
    if (iteration > 100000) {
      throw Error(ErrorCode::kBudgetExceeded, "successive shortest paths did not converge");
    }
    bool done = true;
    for (int p : sources) {
      if (excess[p] > 0) done = false;
    }
    if (done) break;
    std::vector<Arc> arcs;
    for (int p : sources) {
      if (excess[p] > 0) arcs.push_back({s, 1 + p, Scalar(0), -1, -1, false});
    }
    for (int p : sources) {
      for (int q : sinks) {
        arcs.push_back({1 + p, 1 + q, metric(p, q), p, q, false});
        if (flow[p][q] > 0) arcs.push_back({1 + q, 1 + p, -metric(p, q), p, q, true});
      }
    }
    for (int q : sinks) {
      if (excess[q] < 0) arcs.push_back({1 + q, t, Scalar(0), -1, -1, false});
    }
    std::vector<std::optional<Scalar>> dist(nodes);
    std::vector<int> via(nodes, -1);
    dist[s] = Scalar(0);
    for (int round = 0; round < nodes; ++round) {
      bool changed = false;
      for (std::size_t a = 0; a < arcs.size(); ++a) {
        const Arc& arc = arcs[a];
        if (!dist[arc.from]) continue;
        Scalar cand = *dist[arc.from] + arc.cost;
        if (!dist[arc.to] || cand < *dist[arc.to]) {
          dist[arc.to] = cand;
          via[arc.to] = static_cast<int>(a);
          changed = true;
        }
      }
      if (!changed) break;
    }
    if (!dist[t]) throw Error(ErrorCode::kNonZeroSum, "supplies and demands do not balance");
    std::vector<int> path;
    for (int v = t; v != s; v = arcs[via[v]].from) path.push_back(via[v]);
    Scalar amount = excess[arcs[path.back()].to - 1];
    Scalar demand = -excess[arcs[path.front()].from - 1];
    if (demand < amount) amount = demand;
    for (int a : path) {
      if (arcs[a].reverse && flow[arcs[a].p][arcs[a].q] < amount) amount = flow[arcs[a].p][arcs[a].q];
    }
    for (int a : path) {
      const Arc& arc = arcs[a];
      if (arc.p < 0) continue;
      if (arc.reverse) {
        flow[arc.p][arc.q] -= amount;
      } else {
        flow[arc.p][arc.q] += amount;
      }
    }
    excess[arcs[path.back()].to - 1] -= amount;
    excess[arcs[path.front()].from - 1] += amount;
  }
  return flow;
}

// Minimum-weight perfect matching on `points` by DP over subsets; pairs are
// returned in the order the DP fixes them (lowest unmatched point first).
inline std::vector<std::pair<int, int>> min_weight_matching(const std::vector<int>& points,
                                                            const FiniteMetric& metric) {
  const int k = static_cast<int>(points.size());
  if (k % 2 != 0) throw Error(ErrorCode::kNonZeroSum, "odd number of odd points");
  if (k > kMaxParityPoints) {
    throw Error(ErrorCode::kBudgetExceeded, std::to_string(k) + " odd points exceed the matching limit of " +
                                                std::to_string(kMaxParityPoints));
  }
  const std::size_t full = (std::size_t{1} << k) - 1;
  std::vector<Scalar> best(full + 1);
  std::vector<int> partner(full + 1, -1);
  std::vector<char> known(full + 1, 0);
  known[0] = 1;
  best[0] = 0;
  for (std::size_t mask = 1; mask <= full; ++mask) {
    if (__builtin_popcountll(mask) % 2 != 0) continue;
    int i = __builtin_ctzll(mask);
    for (int j = i + 1; j < k; ++j) {
      if (!(mask >> j & 1)) continue;
      std::size_t rest = mask & ~(std::size_t{1} << i) & ~(std::size_t{1} << j);
      Scalar cand = best[rest] + metric(points[i], points[j]);
      if (!known[mask] || cand < best[mask]) {
        best[mask] = cand;
        partner[mask] = j;
        known[mask] = 1;
      }
    }
  }
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t mask = full; mask != 0;) {
    int i = __builtin_ctzll(mask);
    int j = partner[mask];
    pairs.emplace_back(points[i], points[j]);
    mask &= ~(std::size_t{1} << i) & ~(std::size_t{1} << j);
  }
  return pairs;
}

inline void require_single_factor(const Instance& inst, bool ok, const char* what) {
  if (inst.group().factor_count() != 1 || !ok) {
    throw Error(ErrorCode::kUnsupportedFactor, std::string("expected a single ") + what + " factor");
  }
}

}  // namespace detail

// Optimal plan for a single Z or Q factor.
inline TransportPlan solve_flow(const Instance& inst) {
  const FactorSpec& fs = inst.group().factor(0);
  detail::require_single_factor(inst, fs.kind != FactorKind::kMod, "Z or R");
  std::vector<Scalar> supply;
  for (const GroupElement& g : inst.coeffs()) supply.push_back(g.coords[0]);
  auto flow = detail::min_cost_transport(supply, inst.metric());
  TransportPlan plan = zero_plan(inst.group(), inst.size());
  for (int p = 0; p < inst.size(); ++p) {
    for (int q = 0; q < inst.size(); ++q) {
      if (flow[p][q] != 0) plan.set(p, q, GroupElement{{flow[p][q]}});
    }
  }
  plan.cost = plan_cost(plan, inst.metric());
  plan.method = "flow";
  return plan;
}

// Optimal plan for a single Z_2 factor: a minimum-weight perfect matching of
// the points carrying 1. Routing through other points never helps because the
// metric satisfies the triangle inequality.
inline TransportPlan solve_parity(const Instance& inst) {
  detail::require_single_factor(inst, inst.group().factor(0).is_parity(), "Z_2");
  std::vector<int> odd;
  for (int i = 0; i < inst.size(); ++i) {
    if (inst.coeffs()[i].coords[0] != 0) odd.push_back(i);
  }
  TransportPlan plan = zero_plan(inst.group(), inst.size());
  for (auto [a, b] : detail::min_weight_matching(odd, inst.metric())) plan.set(a, b, elem({1}));
  plan.cost = plan_cost(plan, inst.metric());
  plan.method = "parity";
  return plan;
}

// Solves each factor independently and recombines coordinate-wise. Optimal
// for any weighted l1 product because both cost and row constraints split
// over factors.
inline TransportPlan solve(const Instance& inst, const SolveOptions& opts = {}) {
  const GroupSpec& g = inst.group();
  TransportPlan plan = zero_plan(g, inst.size());
  Scalar total = 0;
  std::string method;
  for (std::size_t f = 0; f < g.factor_count(); ++f) {
    Instance part = inst.project_factor(f);
    const FactorSpec& fs = g.factor(f);
    TransportPlan sub;
    if (fs.kind != FactorKind::kMod) {
      sub = solve_flow(part);
    } else if (fs.is_parity()) {
      sub = solve_parity(part);
    } else {
      SolveOptions local;
      local.budget = opts.budget;
      sub = solve_brute(part, local);
    }
    method = sub.method;
    total += *sub.cost;
    const int off = g.offset(f);
    for (int i = 0; i < inst.size(); ++i) {
      for (int j = 0; j < inst.size(); ++j) {
        for (int k = 0; k < fs.width(); ++k) plan.entries[i][j].coords[off + k] = sub.at(i, j).coords[k];
      }
    }
  }
  plan.cost = total;
  plan.method = g.factor_count() == 1 ? method : "decomposed";
  return plan;
}

}  // namespace gcot

#endif  // GCOT_SOLVER_HPP_
