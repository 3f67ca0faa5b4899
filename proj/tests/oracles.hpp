#ifndef GCOT_TESTS_ORACLES_HPP_
#define GCOT_TESTS_ORACLES_HPP_

// Seeded generators and naive reference computations shared by the tests.
// The references deliberately avoid the library's search code: they work on
// raw residue digits and enumerate every upper-triangle entry.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "gcot/chain.hpp"
#include "gcot/group.hpp"
#include "gcot/metric.hpp"
#include "gcot/plan.hpp"
#include "gcot/rational.hpp"

namespace testkit {

using gcot::FactorSpec;
using gcot::FiniteMetric;
using gcot::GroupElement;
using gcot::GroupSpec;
using gcot::Instance;
using gcot::Scalar;

inline Scalar ratio(long num, long den) {
  Scalar x(num, den);
  x.canonicalize();
  return x;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  bool coin() { return uniform(0, 1) == 1; }
  template <class T>
  const T& pick(const std::vector<T>& xs) {
    return xs[static_cast<std::size_t>(uniform(0, static_cast<int>(xs.size()) - 1))];
  }

 private:
  std::mt19937_64 eng_;
};

// Residue tuples of a mixed-radix group, first modulus most significant.
inline std::vector<std::vector<int>> digit_tuples(const std::vector<int>& moduli) {
  std::vector<std::vector<int>> out{{}};
  for (int m : moduli) {
    std::vector<std::vector<int>> next;
    for (const auto& p : out) {
      for (int r = 0; r < m; ++r) {
        auto q = p;
        q.push_back(r);
        next.push_back(q);
      }
    }
    out = next;
  }
  return out;
}

inline int tuple_index(const std::vector<int>& moduli, const std::vector<int>& d) {
  int idx = 0;
  for (std::size_t k = 0; k < moduli.size(); ++k) idx = idx * moduli[k] + d[k];
  return idx;
}

// Random norm table: symmetric random step weights, closed under shortest
// paths in the Cayley graph. Every norm arises this way (take the norm itself
// as the step weights), so the generator reaches all valid tables.
inline std::vector<Scalar> random_norm_table(Rng& rng, const std::vector<int>& moduli, int max_step = 4) {
  auto tuples = digit_tuples(moduli);
  const int n = static_cast<int>(tuples.size());
  auto neg = [&](int i) {
    std::vector<int> d = tuples[i];
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = (moduli[k] - d[k]) % moduli[k];
    return tuple_index(moduli, d);
  };
  auto plus = [&](int i, int j) {
    std::vector<int> d(moduli.size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = (tuples[i][k] + tuples[j][k]) % moduli[k];
    return tuple_index(moduli, d);
  };
  std::vector<Scalar> step(n, Scalar(0));
  for (int i = 1; i < n; ++i) {
    if (step[i] != 0) continue;
    Scalar w(rng.uniform(1, max_step * 2), 2);
    w.canonicalize();
    step[i] = w;
    step[neg(i)] = w;
  }
  std::vector<Scalar> dist = step;
  // Bellman-Ford style relaxation until stable.
  for (bool changed = true; changed;) {
    changed = false;
    for (int i = 0; i < n; ++i) {
      for (int s = 1; s < n; ++s) {
        int j = plus(i, s);
        if (j == 0) continue;
        Scalar cand = dist[i] + step[s];
        if (cand < dist[j]) {
          dist[j] = cand;
          changed = true;
        }
      }
    }
  }
  dist[0] = 0;
  return dist;
}

// Factorizations of orders up to max_order as products of cyclic groups,
// each either one table factor or several factors (Z2 shorthand included).
inline GroupSpec random_finite_group(Rng& rng, int max_order = 8) {
  static const std::vector<std::vector<int>> shapes = {
      {2}, {3}, {4}, {5}, {6}, {7}, {8}, {2, 2}, {2, 3}, {2, 4}, {2, 2, 2}};
  std::vector<std::vector<int>> ok;
  for (const auto& s : shapes) {
    int o = 1;
    for (int m : s) o *= m;
    if (o <= max_order) ok.push_back(s);
  }
  const std::vector<int>& shape = rng.pick(ok);
  std::vector<FactorSpec> factors;
  switch (rng.uniform(0, 2)) {
    case 0:  // one table over the whole product
      factors.push_back(FactorSpec::Mod(shape, random_norm_table(rng, shape)));
      break;
    default:  // l1 product of cyclic tables
      for (int m : shape) {
        if (m == 2) {
          factors.push_back(FactorSpec::Z2(Scalar(rng.uniform(1, 3))));
        } else {
          factors.push_back(FactorSpec::Mod({m}, random_norm_table(rng, {m})));
        }
      }
  }
  return GroupSpec(std::move(factors));
}

// Random positive edge weights closed under shortest paths.
inline FiniteMetric random_metric(Rng& rng, int n, int max_weight = 12) {
  gcot::Matrix d(n, std::vector<Scalar>(n, Scalar(0)));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Scalar w(rng.uniform(1, max_weight), rng.uniform(1, 3));
      w.canonicalize();
      d[i][j] = d[j][i] = w;
    }
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
      }
    }
  }
  return gcot::metric_from_matrix(std::move(d));
}

inline GroupElement random_element(Rng& rng, const GroupSpec& spec, int int_range = 3) {
  GroupElement x;
  for (const FactorSpec& f : spec.factors()) {
    switch (f.kind) {
      case gcot::FactorKind::kMod:
        for (int m : f.moduli) x.coords.emplace_back(rng.uniform(0, m - 1));
        break;
      case gcot::FactorKind::kInt:
        x.coords.emplace_back(rng.uniform(-int_range, int_range));
        break;
      case gcot::FactorKind::kReal: {
        Scalar v(rng.uniform(-int_range * 2, int_range * 2), 2);
        v.canonicalize();
        x.coords.push_back(v);
        break;
      }
    }
  }
  return x;
}

inline std::vector<GroupElement> random_zero_sum(Rng& rng, const GroupSpec& spec, int n, int int_range = 3) {
  std::vector<GroupElement> out;
  GroupElement total = gcot::zero(spec);
  for (int i = 0; i + 1 < n; ++i) {
    out.push_back(random_element(rng, spec, int_range));
    total = gcot::add(spec, total, out.back());
  }
  out.push_back(gcot::neg(spec, total));
  return out;
}

// Naive optimum over a finite group: every antisymmetric assignment of all
// n(n-1)/2 upper entries, filtered by the row sums.
inline Scalar oracle_min_cost_finite(const Instance& inst) {
  const GroupSpec& spec = inst.group();
  std::vector<GroupElement> elems = gcot::enumerate_elements(spec);
  const int n = inst.size();
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
  }
  std::vector<Scalar> norms;
  for (const auto& e : elems) norms.push_back(gcot::norm(spec, e));
  std::optional<Scalar> best;
  std::vector<std::size_t> pick(pairs.size(), 0);
  for (;;) {
    std::vector<GroupElement> rows(n, gcot::zero(spec));
    Scalar cost = 0;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const auto [i, j] = pairs[p];
      const GroupElement& g = elems[pick[p]];
      rows[i] = gcot::add(spec, rows[i], g);
      rows[j] = gcot::sub(spec, rows[j], g);
      cost += norms[pick[p]] * inst.metric()(i, j);
    }
    if (rows == inst.coeffs() && (!best || cost < *best)) best = cost;
    std::size_t k = 0;
    while (k < pick.size() && ++pick[k] == elems.size()) pick[k++] = 0;
    if (k == pick.size()) break;
  }
  return *best;
}

// Naive optimum for a single Z factor with entries in [-bound, bound].
inline Scalar oracle_min_cost_int(const Instance& inst, long bound) {
  const int n = inst.size();
  const Scalar w = inst.group().factor(0).weight;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
  }
  std::optional<Scalar> best;
  std::vector<long> pick(pairs.size(), -bound);
  for (;;) {
    std::vector<long> rows(n, 0);
    Scalar cost = 0;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      rows[pairs[p].first] += pick[p];
      rows[pairs[p].second] -= pick[p];
      cost += w * std::abs(pick[p]) * inst.metric()(pairs[p].first, pairs[p].second);
    }
    bool ok = true;
    for (int i = 0; i < n; ++i) ok = ok && Scalar(rows[i]) == inst.coeffs()[i].coords[0];
    if (ok && (!best || cost < *best)) best = cost;
    std::size_t k = 0;
    while (k < pick.size() && ++pick[k] > bound) pick[k++] = -bound;
    if (k == pick.size()) break;
  }
  return *best;
}

// The four nonbranching equalities evaluated row by row.
inline bool oracle_nbp(const gcot::TransportPlan& plan, const GroupSpec& spec,
                       const std::vector<GroupElement>& coeffs) {
  for (int i = 0; i < plan.size(); ++i) {
    Scalar split = 0;
    for (int j = 0; j < plan.size(); ++j) split += gcot::norm(spec, plan.at(i, j));
    if (split != gcot::norm(spec, coeffs[i])) return false;
  }
  return true;
}

// Depth-first cycle detection on the index graph of nonzero entries.
inline bool oracle_forest(const gcot::TransportPlan& plan) {
  const int n = plan.size();
  int edges = 0, components = 0;
  std::vector<int> seen(n, 0);
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++components;
    std::vector<int> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int y = 0; y < n; ++y) {
        if (y == x || gcot::is_zero(plan.at(x, y))) continue;
        if (x < y) ++edges;
        if (!seen[y]) {
          seen[y] = 1;
          stack.push_back(y);
        }
      }
    }
  }
  return edges == n - components;
}

// Groups whose stars simplify by construction: l1 products of Z, R and Z_2.
inline GroupSpec random_lattice_group(Rng& rng, int max_factors = 3) {
  int k = rng.uniform(1, max_factors);
  std::vector<FactorSpec> fs;
  for (int i = 0; i < k; ++i) {
    Scalar w(rng.uniform(1, 4), rng.uniform(1, 2));
    w.canonicalize();
    switch (rng.uniform(0, 2)) {
      case 0: fs.push_back(FactorSpec::Int(w)); break;
      case 1: fs.push_back(FactorSpec::Real(w)); break;
      default: fs.push_back(FactorSpec::Z2(w)); break;
    }
  }
  return GroupSpec(std::move(fs));
}

// Sum of random boundary-to-boundary paths and random cycles, so the
// boundary is supported on B = {0, .., n_boundary - 1}.
inline gcot::PolyChain1 random_chain(Rng& rng, const GroupSpec& spec, int n_boundary, int n_interior) {
  const int n = n_boundary + n_interior;
  std::vector<int> b(n_boundary);
  for (int i = 0; i < n_boundary; ++i) b[i] = i;
  gcot::PolyChain1 s(random_metric(rng, n), spec, b);
  auto walk = [&](int from, int to, const GroupElement& g) {
    int at = from;
    int hops = rng.uniform(0, std::min(3, n_interior));
    for (int h = 0; h < hops; ++h) {
      int next = n_boundary + rng.uniform(0, n_interior - 1);
      if (next == at) continue;
      s.add_edge(at, next, g);
      at = next;
    }
    if (at != to) s.add_edge(at, to, g);
  };
  int paths = rng.uniform(1, 4);
  for (int k = 0; k < paths; ++k) {
    int u = rng.uniform(0, n_boundary - 1), v = rng.uniform(0, n_boundary - 1);
    walk(u, v, random_element(rng, spec, 2));
  }
  if (n_interior > 0 && rng.coin()) {
    int u = n_boundary + rng.uniform(0, n_interior - 1);
    walk(u, u, random_element(rng, spec, 2));
  }
  return s;
}

}  // namespace testkit

#endif  // GCOT_TESTS_ORACLES_HPP_
