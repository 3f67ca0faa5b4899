#ifndef GCOT_NBP_HPP_
#define GCOT_NBP_HPP_

// Nonbranching plans: a plan is nonbranching when every row splits its
// coefficient without loss, |g_i| = sum_j |g_ij|. Checking, metric-free
// construction for Z / R / Z_2 products, and exhaustive search on finite groups.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "gcot/error.hpp"
#include "gcot/group.hpp"
#include "gcot/metric.hpp"
#include "gcot/plan.hpp"
#include "gcot/solver.hpp"

namespace gcot {

struct ViolatedRow {
  int row;
  Scalar coeff_norm;  // |g_i|
  Scalar split_norm;  // sum_j |g_ij|
};

struct NbpReport {
  bool nbp = false;
  bool acyclic = false;
  std::vector<ViolatedRow> violated_rows;
  // Vertex indices of a cycle in the support graph, when one exists.
  std::optional<std::vector<int>> cycle_witness;
};

struct AcyclicityResult {
  bool acyclic = true;
  std::optional<std::vector<int>> cycle;
};

// Undirected support graph on plan indices: {i, j} with i < j and g_ij != 0.
inline std::vector<std::pair<int, int>> support_graph(const TransportPlan& plan) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < plan.size(); ++i) {
    for (int j = i + 1; j < plan.size(); ++j) {
      if (!is_zero(plan.at(i, j))) edges.emplace_back(i, j);
    }
  }
  return edges;
}

// Union-find over the support edges; the first edge closing a cycle yields a
// witness (the tree path between its endpoints plus the edge).
inline AcyclicityResult check_acyclic(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<std::vector<int>> forest(n);
  for (auto [u, v] : edges) {
    int ru = find(u), rv = find(v);
    if (ru != rv) {
      parent[ru] = rv;
      forest[u].push_back(v);
      forest[v].push_back(u);
      continue;
    }
    std::vector<int> prev(n, -1);
    std::queue<int> queue;
    queue.push(u);
    prev[u] = u;
    while (!queue.empty()) {
      int x = queue.front();
      queue.pop();
      for (int y : forest[x]) {
        if (prev[y] < 0) {
          prev[y] = x;
          queue.push(y);
        }
      }
    }
    std::vector<int> cycle;
    for (int x = v; x != u; x = prev[x]) cycle.push_back(x);
    cycle.push_back(u);
    std::reverse(cycle.begin(), cycle.end());
    return {false, cycle};
  }
  return {true, std::nullopt};
}

inline AcyclicityResult is_acyclic(const TransportPlan& plan) {
  return check_acyclic(plan.size(), support_graph(plan));
}

// Metric-free check of the four nonbranching conditions.
inline NbpReport check_nbp(const TransportPlan& plan, const GroupSpec& group,
                           const std::vector<GroupElement>& coeffs) {
  std::string why = feasibility_error(plan, group, coeffs);
  if (!why.empty()) throw Error(ErrorCode::kInfeasiblePlan, why);
  NbpReport report;
  for (int i = 0; i < plan.size(); ++i) {
    Scalar split = 0;
    for (int j = 0; j < plan.size(); ++j) split += norm(group, plan.at(i, j));
    Scalar own = norm(group, coeffs[i]);
    if (own != split) report.violated_rows.push_back({i, own, split});
  }
  report.nbp = report.violated_rows.empty();
  AcyclicityResult acyclic = is_acyclic(plan);
  report.acyclic = acyclic.acyclic;
  report.cycle_witness = acyclic.cycle;
  return report;
}

inline NbpReport check_nbp(const TransportPlan& plan, const Instance& inst) {
  return check_nbp(plan, inst.group(), inst.coeffs());
}

namespace detail {

inline void require_zero_sum(const GroupSpec& group, const std::vector<GroupElement>& coeffs) {
  for (const GroupElement& g : coeffs) require_conforms(group, g);
  if (!is_zero(sum_elements(group, coeffs))) {
    throw Error(ErrorCode::kNonZeroSum, "coefficients do not sum to zero");
  }
}

// Largest positive value sends to the most negative one until all vanish;
// ties go to the smaller index. Each step retires one index, so the support
// is a forest, and every index only sends or only receives.
inline std::vector<std::vector<Scalar>> merge_signed(std::vector<Scalar> values) {
  const int n = static_cast<int>(values.size());
  std::vector<std::vector<Scalar>> out(n, std::vector<Scalar>(n, Scalar(0)));
  for (;;) {
    int p = -1, q = -1;
    for (int i = 0; i < n; ++i) {
      if (values[i] > 0 && (p < 0 || values[i] > values[p])) p = i;
      if (values[i] < 0 && (q < 0 || values[i] < values[q])) q = i;
    }
    if (p < 0 || q < 0) break;
    Scalar amount = values[p] < -values[q] ? values[p] : Scalar(-values[q]);
    out[p][q] += amount;
    out[q][p] -= amount;
    values[p] -= amount;
    values[q] += amount;
  }
  return out;
}

// Pairs consecutive indices carrying 1.
inline std::vector<std::pair<int, int>> pair_ones(const std::vector<bool>& ones) {
  std::vector<std::pair<int, int>> pairs;
  int open = -1;
  for (int i = 0; i < static_cast<int>(ones.size()); ++i) {
    if (!ones[i]) continue;
    if (open < 0) {
      open = i;
    } else {
      pairs.emplace_back(open, i);
      open = -1;
    }
  }
  return pairs;
}

}  // namespace detail

namespace detail {

// Support of an optimal source-to-sink flow made acyclic at equal cost.
// Adding the same amount to every entry along a cycle keeps all row sums;
// moving in the direction that does not raise the cost until some entry
// vanishes deletes an edge.
inline void break_flow_cycles(std::vector<std::vector<Scalar>>& flow, const FiniteMetric& metric) {
  const int n = static_cast<int>(flow.size());
  for (;;) {
    std::vector<std::pair<int, int>> edges;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (flow[p][q] != 0) edges.emplace_back(p, q);
      }
    }
    AcyclicityResult r = check_acyclic(n, edges);
    if (r.acyclic) return;
    const std::vector<int>& c = *r.cycle;
    const std::size_t k = c.size();
    auto entry = [&](std::size_t t) -> Scalar& { return flow[c[t]][c[(t + 1) % k]]; };
    Scalar slope = 0;
    for (std::size_t t = 0; t < k; ++t) slope += (entry(t) > 0 ? 1 : -1) * metric(c[t], c[(t + 1) % k]);
    const int dir = slope > 0 ? -1 : 1;
    std::optional<Scalar> amount;
    for (std::size_t t = 0; t < k; ++t) {
      const bool shrinks = (entry(t) > 0) != (dir > 0);
      if (shrinks && (!amount || abs_value(entry(t)) < *amount)) amount = abs_value(entry(t));
    }
    for (std::size_t t = 0; t < k; ++t) {
      entry(t) += dir * *amount;
      flow[c[(t + 1) % k]][c[t]] = -entry(t);
    }
  }
}

inline TransportPlan construct_nbp_impl(const GroupSpec& group, const std::vector<GroupElement>& coeffs,
                                        const FiniteMetric* metric) {
  for (std::size_t f = 0; f < group.factor_count(); ++f) {
    const FactorSpec& fs = group.factor(f);
    if (fs.kind == FactorKind::kMod && !fs.is_parity()) {
      throw Error(ErrorCode::kUnsupportedFactor,
                  "construct_nbp supports Z, R and Z_2 factors only (factor " + std::to_string(f) + ")");
    }
  }
  require_zero_sum(group, coeffs);
  const int n = static_cast<int>(coeffs.size());
  if (metric && metric->size() != n) {
    throw Error(ErrorCode::kShapeMismatch, "metric size differs from the number of coefficients");
  }
  TransportPlan plan = zero_plan(group, n);
  std::vector<std::vector<std::pair<int, int>>> matchings(group.factor_count());
  for (std::size_t f = 0; f < group.factor_count(); ++f) {
    const int off = group.offset(f);
    if (group.factor(f).is_parity()) {
      if (metric) {
        std::vector<int> odd;
        for (int i = 0; i < n; ++i) {
          if (coeffs[i].coords[off] != 0) odd.push_back(i);
        }
        matchings[f] = min_weight_matching(odd, *metric);
      } else {
        std::vector<bool> ones(n);
        for (int i = 0; i < n; ++i) ones[i] = coeffs[i].coords[off] != 0;
        matchings[f] = pair_ones(ones);
      }
    } else {
      std::vector<Scalar> values(n);
      for (int i = 0; i < n; ++i) values[i] = coeffs[i].coords[off];
      std::vector<std::vector<Scalar>> moved;
      if (metric) {
        // min_cost_transport gives flow[p][q] >= 0 from p to q; make it antisymmetric.
        moved = min_cost_transport(values, *metric);
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) {
            if (moved[i][j] > 0) moved[j][i] = -moved[i][j];
          }
        }
        break_flow_cycles(moved, *metric);
      } else {
        moved = merge_signed(std::move(values));
      }
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) plan.entries[i][j].coords[off] = moved[i][j];
      }
    }
  }

  // Two parity factors: an optimal matching of each factor can still close
  // alternating cycles. Both matchings are optimal on the cycle's vertices, so
  // copying the first factor's cycle edges into the second costs nothing.
  std::vector<std::size_t> parity;
  for (std::size_t f = 0; f < group.factor_count(); ++f) {
    if (group.factor(f).is_parity()) parity.push_back(f);
  }
  if (metric && parity.size() == 2 && group.factor_count() == 2) {
    auto& first = matchings[parity[0]];
    auto& second = matchings[parity[1]];
    for (;;) {
      std::vector<std::pair<int, int>> edges = first;
      for (auto e : second) {
        if (std::find(first.begin(), first.end(), e) == first.end()) edges.push_back(e);
      }
      AcyclicityResult r = check_acyclic(n, edges);
      if (r.acyclic) break;
      std::vector<bool> on(n, false);
      for (int v : *r.cycle) on[v] = true;
      std::erase_if(second, [&](const std::pair<int, int>& e) { return on[e.first] && on[e.second]; });
      for (auto e : first) {
        if (on[e.first] && on[e.second]) second.push_back(e);
      }
    }
  }
  for (std::size_t f : parity) {
    const int off = group.offset(f);
    for (auto [a, b] : matchings[f]) {
      if (a > b) std::swap(a, b);
      plan.entries[a][b].coords[off] = 1;
      plan.entries[b][a].coords[off] = 1;
    }
  }
  plan.method = "construct";
  if (metric) plan.cost = plan_cost(plan, *metric);
  return plan;
}

}  // namespace detail

// Metric-free nonbranching plan for a weighted l1 product of Z, R and Z_2
// factors, built factor by factor and recombined: Z_2 pairs consecutive ones,
// Z / R let the largest positive value absorb the most negative. The support
// is a forest for R, Z, Z_2 and Z_2 x Z_2; for other products it need not be.
inline TransportPlan construct_nbp(const GroupSpec& group, const std::vector<GroupElement>& coeffs) {
  return detail::construct_nbp_impl(group, coeffs, nullptr);
}

// Same equalities and forest guarantee, with the per-factor choices made
// optimally for the given metric: a matching of minimal length on Z_2
// factors and a minimal-cost flow on Z / R factors. Which source feeds which
// sink depends on distances, so the metric-free plan is not optimal in general.
inline TransportPlan construct_nbp(const GroupSpec& group, const std::vector<GroupElement>& coeffs,
                                   const FiniteMetric& metric) {
  return detail::construct_nbp_impl(group, coeffs, &metric);
}

inline TransportPlan construct_nbp(const Instance& inst) {
  return construct_nbp(inst.group(), inst.coeffs(), inst.metric());
}

// Outcome of an exhaustive search: a plan, or the size of the space proven
// to contain none.
struct NbpSearchResult {
  std::optional<TransportPlan> plan;
  std::uint64_t search_space = 0;  // |G|^(free entries)
  std::uint64_t leaves = 0;        // complete assignments examined
};

struct NbpSearchOptions {
  std::uint64_t budget = 50'000'000;
  bool require_acyclic = false;
};

namespace detail {

class NbpSearch {
 public:
  NbpSearch(const FiniteGroup& g, const std::vector<std::size_t>& coeffs, bool acyclic)
      : g_(g), coeffs_(coeffs), n_(static_cast<int>(coeffs.size())), acyclic_(acyclic) {
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
    entries_.assign(n_, std::vector<std::size_t>(n_, 0));
    split_.assign(n_, Scalar(0));
  }

  std::size_t free_entries() const { return pairs_.size(); }
  std::uint64_t leaves() const { return leaves_; }

  std::optional<std::vector<std::vector<std::size_t>>> run() {
    if (n_ == 0) return entries_;
    if (close_rows(0) && descend(0)) return entries_;
    return std::nullopt;
  }

 private:
  const Scalar& coeff_norm(int i) const { return g_.norm_of(coeffs_[i]); }

  bool close_rows(std::size_t depth) {
    for (int row : completes_at_[depth]) {
      std::size_t rest = coeffs_[row];
      for (int j = 0; j + 1 < n_; ++j) {
        if (j != row) rest = g_.sub(rest, entries_[row][j]);
      }
      entries_[row][n_ - 1] = rest;
      entries_[n_ - 1][row] = g_.neg(rest);
      if (split_[row] + g_.norm_of(rest) != coeff_norm(row)) return false;
    }
    return true;
  }

  bool descend(std::size_t depth) {
    if (depth == pairs_.size()) return leaf();
    auto [i, j] = pairs_[depth];
    for (std::size_t c = 0; c < g_.size(); ++c) {
      const Scalar& w = g_.norm_of(c);
      if (split_[i] + w > coeff_norm(i) || split_[j] + w > coeff_norm(j)) continue;
      entries_[i][j] = c;
      entries_[j][i] = g_.neg(c);
      split_[i] += w;
      split_[j] += w;
      bool found = close_rows(depth + 1) && descend(depth + 1);
      split_[i] -= w;
      split_[j] -= w;
      if (found) return true;
    }
    return false;
  }

  bool leaf() {
    ++leaves_;
    Scalar last = 0;
    for (int j = 0; j + 1 < n_; ++j) last += g_.norm_of(entries_[n_ - 1][j]);
    if (last != coeff_norm(n_ - 1)) return false;
    if (!acyclic_) return true;
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < n_; ++a) {
      for (int b = a + 1; b < n_; ++b) {
        if (entries_[a][b] != 0) edges.emplace_back(a, b);
      }
    }
    return check_acyclic(n_, edges).acyclic;
  }

  const FiniteGroup& g_;
  std::vector<std::size_t> coeffs_;
  int n_;
  bool acyclic_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<std::vector<int>> completes_at_;
  std::vector<std::vector<std::size_t>> entries_;
  std::vector<Scalar> split_;
  std::uint64_t leaves_ = 0;
};

inline long double pow_ld(std::size_t base, std::size_t exp) {
  long double r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= static_cast<long double>(base);
  return r;
}

inline NbpSearchResult search_nbp_indexed(const FiniteGroup& g, const std::vector<std::size_t>& coeffs,
                                          const NbpSearchOptions& opts) {
  NbpSearch search(g, coeffs, opts.require_acyclic);
  long double space = pow_ld(g.size(), search.free_entries());
  if (space > static_cast<long double>(opts.budget)) {
    throw Error(ErrorCode::kBudgetExceeded, std::to_string(g.size()) + "^" +
                                                std::to_string(search.free_entries()) +
                                                " assignments exceed budget " +
                                                std::to_string(opts.budget));
  }
  NbpSearchResult result;
  result.search_space = static_cast<std::uint64_t>(space);
  auto found = search.run();
  result.leaves = search.leaves();
  if (found) {
    const int n = static_cast<int>(coeffs.size());
    TransportPlan plan = zero_plan(g.spec(), n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) plan.entries[i][j] = g.element((*found)[i][j]);
    }
    plan.method = "search";
    result.plan = std::move(plan);
  }
  return result;
}

}  // namespace detail

// Exhaustive search for a nonbranching plan (optionally with acyclic support)
// over all entry assignments in a finite group. The first plan in search order
// is returned; otherwise the result records the size of the refuted space.
inline NbpSearchResult search_nbp(const GroupSpec& group, const std::vector<GroupElement>& coeffs,
                                  const NbpSearchOptions& opts = {}) {
  FiniteGroup g(group);
  detail::require_zero_sum(group, coeffs);
  std::vector<std::size_t> idx;
  for (const GroupElement& c : coeffs) idx.push_back(g.index_of(c));
  return detail::search_nbp_indexed(g, idx, opts);
}

namespace detail {

inline bool finite_indecomposable(const FiniteGroup& g, std::size_t x) {
  for (std::size_t h = 1; h < g.size(); ++h) {
    if (h == x) continue;
    if (g.norm_of(h) + g.norm_of(g.sub(x, h)) == g.norm_of(x)) return false;
  }
  return true;
}

}  // namespace detail

struct NbpCounterexample {
  std::vector<GroupElement> coeffs;
  std::uint64_t search_space = 0;
  std::string pattern;  // "multiples" or "multiset"
};

// Looks for coefficients admitting no nonbranching plan. Tries g,...,g,-kg
// for nonzero indecomposable g first, then every zero-sum multiset of nonzero
// elements of size 2..n_max in lexicographic order.
inline std::optional<NbpCounterexample> find_nbp_counterexample(const GroupSpec& group, int n_max,
                                                                const NbpSearchOptions& opts = {}) {
  FiniteGroup g(group);
  std::vector<std::vector<std::size_t>> tried;
  auto attempt = [&](std::vector<std::size_t> coeffs,
                     const char* pattern) -> std::optional<NbpCounterexample> {
    std::vector<std::size_t> key = coeffs;
    std::sort(key.begin(), key.end());
    if (std::find(tried.begin(), tried.end(), key) != tried.end()) return std::nullopt;
    tried.push_back(key);
    NbpSearchResult r = detail::search_nbp_indexed(g, coeffs, opts);
    if (r.plan) return std::nullopt;
    NbpCounterexample out;
    for (std::size_t c : coeffs) out.coeffs.push_back(g.element(c));
    out.search_space = r.search_space;
    out.pattern = pattern;
    return out;
  };

  for (std::size_t x = 1; x < g.size(); ++x) {
    if (!detail::finite_indecomposable(g, x)) continue;
    std::size_t kx = 0;
    for (int k = 1; k + 1 <= n_max; ++k) {
      kx = g.add(kx, x);
      std::vector<std::size_t> coeffs(k, x);
      coeffs.push_back(g.neg(kx));
      if (auto found = attempt(std::move(coeffs), "multiples")) return found;
    }
  }

  for (int size = 2; size <= n_max; ++size) {
    std::vector<std::size_t> cur(size, 1);
    for (;;) {
      std::size_t total = 0;
      for (std::size_t c : cur) total = g.add(total, c);
      if (total == 0) {
        if (auto found = attempt(cur, "multiset")) return found;
      }
      int pos = size - 1;
      while (pos >= 0 && cur[pos] + 1 >= g.size()) --pos;
      if (pos < 0) break;
      ++cur[pos];
      for (int k = pos + 1; k < size; ++k) cur[k] = cur[pos];
    }
  }
  return std::nullopt;
}

}  // namespace gcot

#endif  // GCOT_NBP_HPP_
