#ifndef GCOT_CZT_HPP_
#define GCOT_CZT_HPP_

// Collinearity of zero-mean triples and the search for norms in which every
// nontrivial zero-mean triple is collinear.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gcot/error.hpp"
#include "gcot/fourier_motzkin.hpp"
#include "gcot/group.hpp"
#include "gcot/structure.hpp"

namespace gcot {

enum class CollinearityKind { kTrivial, kCollinear, kNoncollinear };

struct Collinearity {
  CollinearityKind kind = CollinearityKind::kNoncollinear;
  // Which equality holds (first match): 0: |a|+|b|=|c|, 1: |a|+|c|=|b|, 2: |b|+|c|=|a|.
  int which = -1;
  std::array<Scalar, 3> norms;
};

inline Collinearity collinearity_of_norms(const Scalar& na, const Scalar& nb, const Scalar& nc,
                                          bool trivial) {
  Collinearity r;
  r.norms = {na, nb, nc};
  if (trivial) {
    r.kind = CollinearityKind::kTrivial;
    return r;
  }
  if (na + nb == nc) {
    r.which = 0;
  } else if (na + nc == nb) {
    r.which = 1;
  } else if (nb + nc == na) {
    r.which = 2;
  }
  r.kind = r.which < 0 ? CollinearityKind::kNoncollinear : CollinearityKind::kCollinear;
  return r;
}

// A triple containing 0 is trivial.
inline Collinearity collinearity(const GroupSpec& spec, const GroupElement& a, const GroupElement& b,
                                 const GroupElement& c) {
  if (!is_zero(add(spec, add(spec, a, b), c))) {
    throw Error(ErrorCode::kNotZeroMean, element_label(a) + " + " + element_label(b) + " + " +
                                             element_label(c) + " != 0");
  }
  return collinearity_of_norms(norm(spec, a), norm(spec, b), norm(spec, c),
                               is_zero(a) || is_zero(b) || is_zero(c));
}

struct CztResult {
  bool holds = true;
  std::optional<Triple> witness;
};

inline CztResult has_czt(const GroupSpec& spec) {
  FiniteGroup g(spec);
  require_valid_norm(spec);
  for (const Triple& t : enumerate_zero_mean_triples(g)) {
    if (collinearity(spec, t[0], t[1], t[2]).kind == CollinearityKind::kNoncollinear) {
      return {false, t};
    }
  }
  return {};
}

struct PatternRefutation {
  std::vector<int> prefix;  // choices for the first prefix.size() triples
  std::uint64_t patterns = 0;  // completions refuted at once: 3^(remaining)
};

struct NormFeasibilityResult {
  std::vector<int> moduli;
  bool feasible = false;
  std::optional<GroupSpec> witness;  // single Zmod factor, minimum nonzero norm 1
  std::vector<Scalar> witness_table;  // by element index; empty when infeasible
  std::vector<Triple> triples;                      // canonical, no zero entry
  std::vector<std::vector<int>> feasible_patterns;
  std::vector<std::string> family_description;  // one line per feasible pattern
  std::uint64_t pattern_count = 0;              // 3^(triples)
  std::uint64_t refuted_count = 0;
  std::vector<PatternRefutation> refutations;
  std::uint64_t nodes = 0;
};

namespace detail {

inline std::uint64_t pow3(std::size_t k) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < k; ++i) r *= 3;
  return r;
}

class CztSearch {
 public:
  CztSearch(std::vector<int> moduli, std::uint64_t budget)
      : moduli_(std::move(moduli)),
        spec_({FactorSpec::Mod(moduli_, placeholder_table(order_of(moduli_)))}),
        group_(spec_),
        budget_(budget) {
    // One variable per {g, -g} class of nonzero elements, in index order.
    class_of_.assign(group_.size(), -1);
    for (std::size_t i = 1; i < group_.size(); ++i) {
      if (class_of_[i] >= 0) continue;
      class_of_[i] = class_of_[group_.neg(i)] = static_cast<int>(reps_.size());
      reps_.push_back(i);
    }
    const std::size_t vars = reps_.size();
    base_ = LinearSystem(vars);
    for (std::size_t v = 0; v < vars; ++v) base_.add_ge(unit(v), Scalar(1));
    std::set<std::vector<Scalar>> seen;
    for (std::size_t a = 1; a < group_.size(); ++a) {
      for (std::size_t b = 1; b < group_.size(); ++b) {
        std::size_t s = group_.add(a, b);
        if (s == 0) continue;
        // |a + b| <= |a| + |b|
        std::vector<Scalar> row(vars, Scalar(0));
        row[class_of_[s]] += 1;
        row[class_of_[a]] -= 1;
        row[class_of_[b]] -= 1;
        if (std::all_of(row.begin(), row.end(), [](const Scalar& x) { return x <= 0; })) continue;
        if (seen.insert(row).second) base_.add_le(row, Scalar(0));
      }
    }
    std::set<std::array<int, 3>> keys;
    for (const Triple& t : enumerate_zero_mean_triples(group_)) {
      if (is_zero(t[0]) || is_zero(t[1]) || is_zero(t[2])) continue;
      std::array<int, 3> key;
      for (int k = 0; k < 3; ++k) key[k] = class_of_[group_.index_of(t[k])];
      std::array<int, 3> sorted = key;
      std::sort(sorted.begin(), sorted.end());
      if (!keys.insert(sorted).second) continue;
      triples_.push_back(t);
      triple_vars_.push_back(key);
    }
  }

  NormFeasibilityResult run() {
    NormFeasibilityResult r;
    r.moduli = moduli_;
    r.triples = triples_;
    r.pattern_count = pow3(triples_.size());
    std::vector<int> prefix;
    std::optional<std::vector<Scalar>> best;
    descend(base_, prefix, r, best);
    r.feasible = !r.feasible_patterns.empty();
    if (best) {
      std::vector<Scalar> table(group_.size(), Scalar(0));
      for (std::size_t i = 1; i < group_.size(); ++i) table[i] = (*best)[class_of_[i]];
      r.witness_table = table;
      r.witness = GroupSpec({FactorSpec::Mod(moduli_, table)});
    }
    return r;
  }

 private:
  static std::size_t order_of(const std::vector<int>& moduli) {
    std::size_t n = 1;
    for (int m : moduli) {
      if (m < 2) throw Error(ErrorCode::kInvalidInput, "moduli must be at least 2");
      n *= static_cast<std::size_t>(m);
    }
    return n;
  }

  static std::vector<Scalar> placeholder_table(std::size_t n) {
    std::vector<Scalar> t(n, Scalar(1));
    t[0] = 0;
    return t;
  }

  std::vector<Scalar> unit(std::size_t v) const {
    std::vector<Scalar> row(reps_.size(), Scalar(0));
    row[v] = 1;
    return row;
  }

  // Equality choice w for triple t: norms (x, y, z) with 0: x+y=z, 1: x+z=y, 2: y+z=x.
  std::vector<Scalar> pattern_row(std::size_t t, int w) const {
    std::vector<Scalar> row(reps_.size(), Scalar(0));
    const auto& v = triple_vars_[t];
    static constexpr int kLhs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    static constexpr int kRhs[3] = {2, 1, 0};
    row[v[kLhs[w][0]]] += 1;
    row[v[kLhs[w][1]]] += 1;
    row[v[kRhs[w]]] -= 1;
    return row;
  }

  std::string describe(const std::vector<int>& pattern) const {
    std::string s;
    for (std::size_t t = 0; t < pattern.size(); ++t) {
      static constexpr int kLhs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
      static constexpr int kRhs[3] = {2, 1, 0};
      const Triple& tr = triples_[t];
      const int w = pattern[t];
      if (t) s += "; ";
      s += "|" + element_label(tr[kLhs[w][0]]) + "| + |" + element_label(tr[kLhs[w][1]]) + "| = |" +
           element_label(tr[kRhs[w]]) + "|";
    }
    return s.empty() ? "no constraints" : s;
  }

  void descend(const LinearSystem& sys, std::vector<int>& prefix, NormFeasibilityResult& r,
               std::optional<std::vector<Scalar>>& best) {
    if (++r.nodes > budget_) {
      throw Error(ErrorCode::kBudgetExceeded, "pattern search exceeds budget " + std::to_string(budget_));
    }
    if (!sys.feasible()) {
      std::uint64_t count = pow3(triples_.size() - prefix.size());
      r.refuted_count += count;
      r.refutations.push_back({prefix, count});
      return;
    }
    if (prefix.size() == triples_.size()) {
      r.feasible_patterns.push_back(prefix);
      r.family_description.push_back(describe(prefix));
      std::optional<std::vector<Scalar>> x = sys.lex_min();
      if (x && (!best || *x < *best)) best = x;
      return;
    }
    const std::size_t t = prefix.size();
    for (int w = 0; w < 3; ++w) {
      LinearSystem next = sys;
      next.add_eq(pattern_row(t, w), Scalar(0));
      prefix.push_back(w);
      descend(next, prefix, r, best);
      prefix.pop_back();
    }
  }

  std::vector<int> moduli_;
  GroupSpec spec_;
  FiniteGroup group_;
  std::uint64_t budget_;
  std::vector<int> class_of_;
  std::vector<std::size_t> reps_;
  LinearSystem base_{0};
  std::vector<Triple> triples_;
  std::vector<std::array<int, 3>> triple_vars_;
};

}  // namespace detail

// Decides whether the product of cyclic groups Z_m (m in moduli) admits a
// norm with every nontrivial zero-mean triple collinear. Norm values are
// unknowns per {g, -g} class; each collinearity pattern is tested for exact
// feasibility together with subadditivity and |g| >= 1 (positivity up to
// scale). The witness is the lexicographically smallest solution over all
// feasible patterns.
inline NormFeasibilityResult czt_norm_feasibility(const std::vector<int>& moduli,
                                                  std::uint64_t budget = 50'000'000) {
  if (moduli.empty()) throw Error(ErrorCode::kInvalidInput, "need at least one modulus");
  return detail::CztSearch(moduli, budget).run();
}

struct ClassificationRow {
  std::vector<int> invariant_factors;  // d1 | d2 | ... , product = order
  NormFeasibilityResult result;
};

inline std::string group_name(const std::vector<int>& moduli) {
  std::string s;
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    if (i) s += "xZ";
    else s += "Z";
    s += std::to_string(moduli[i]);
  }
  return s;
}

// Invariant factor lists d1 | d2 | ... | dk (all >= 2) with product n.
inline std::vector<std::vector<int>> abelian_groups_of_order(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int rest, int last) -> void {
    if (rest == 1) {
      if (!cur.empty()) out.push_back(cur);
      return;
    }
    for (int d = 2; d <= rest; ++d) {
      if (rest % d != 0) continue;
      if (last > 0 && d % last != 0) continue;
      cur.push_back(d);
      self(self, rest / d, d);
      cur.pop_back();
    }
  };
  rec(rec, n, 0);
  return out;
}

// Every finite Abelian group of order 2..max_order, in order of size.
inline std::vector<ClassificationRow> classify_finite_groups(int max_order,
                                                             std::uint64_t budget = 50'000'000) {
  std::vector<ClassificationRow> rows;
  for (int n = 2; n <= max_order; ++n) {
    for (const auto& factors : abelian_groups_of_order(n)) {
      rows.push_back({factors, czt_norm_feasibility(factors, budget)});
    }
  }
  return rows;
}

struct CyclicForcingResult {
  bool ok = true;
  std::optional<int> step;  // first n with |n g| != n |g|
  // Multiples (i, j, k) of g forming a noncollinear zero-mean triple within
  // the given segment, when one exists.
  std::optional<std::array<int, 3>> witness;
};

// values[n-1] = |n g| for n = 1..N. Checks the triples {-g, -ng, (n+1)g} and
// {-2g, -(n-1)g, (n+1)g} inside the segment for collinearity and reports the
// first step where linearity |n g| = n|g| breaks.
inline CyclicForcingResult czt_cyclic_forcing(const std::vector<Scalar>& values) {
  CyclicForcingResult r;
  const int big_n = static_cast<int>(values.size());
  auto v = [&](int k) -> const Scalar& { return values[k - 1]; };
  for (int n = 1; n < big_n && !r.witness; ++n) {
    std::vector<std::array<int, 3>> probes = {{-1, -n, n + 1}};
    if (n >= 2) probes.push_back({-2, -(n - 1), n + 1});
    for (const auto& p : probes) {
      auto nv = [&](int k) { return k == 0 ? Scalar(0) : v(std::abs(k)); };
      bool trivial = p[0] == 0 || p[1] == 0 || p[2] == 0;
      if (collinearity_of_norms(nv(p[0]), nv(p[1]), nv(p[2]), trivial).kind ==
          CollinearityKind::kNoncollinear) {
        r.witness = p;
        break;
      }
    }
  }
  for (int n = 2; n <= big_n; ++n) {
    if (v(n) != n * v(1)) {
      r.step = n;
      break;
    }
  }
  r.ok = !r.step && !r.witness;
  return r;
}

template <class E>
struct SampledCztResult {
  bool ok = true;
  std::optional<std::array<E, 3>> witness;
};

// Collinearity on user-supplied triples under an exact norm oracle.
template <class E>
SampledCztResult<E> czt_sampled(const NormOracle<E>& nrm, const std::vector<std::array<E, 3>>& triples) {
  SampledCztResult<E> r;
  for (const auto& t : triples) {
    if (!(t[0] + t[1] + t[2]).is_zero()) {
      throw Error(ErrorCode::kNotZeroMean, "sampled triple does not sum to zero");
    }
    bool trivial = t[0].is_zero() || t[1].is_zero() || t[2].is_zero();
    if (collinearity_of_norms(nrm(t[0]), nrm(t[1]), nrm(t[2]), trivial).kind ==
        CollinearityKind::kNoncollinear) {
      r.ok = false;
      r.witness = t;
      return r;
    }
  }
  return r;
}

}  // namespace gcot

#endif  // GCOT_CZT_HPP_
