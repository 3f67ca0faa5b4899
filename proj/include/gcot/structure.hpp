#ifndef GCOT_STRUCTURE_HPP_
#define GCOT_STRUCTURE_HPP_

// Indecomposable elements and the l1 laws they satisfy in groups with
// nonbranching plans; sign classes for torsion-free samples.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gcot/error.hpp"
#include "gcot/group.hpp"

namespace gcot {

namespace detail {

inline void require_no_real(const GroupSpec& spec) {
  for (std::size_t f = 0; f < spec.factor_count(); ++f) {
    if (spec.factor(f).kind == FactorKind::kReal) {
      throw Error(ErrorCode::kUnsupportedFactor, "norm balls over R factors are not finite");
    }
  }
}

}  // namespace detail

// Elements with |h| <= radius, lexicographic by coordinates.
inline std::vector<GroupElement> ball_elements(const GroupSpec& spec, const Scalar& radius,
                                               std::uint64_t budget = 50'000'000) {
  detail::require_no_real(spec);
  std::vector<std::vector<Scalar>> ranges;
  long double space = 1;
  for (std::size_t f = 0; f < spec.factor_count(); ++f) {
    const FactorSpec& fs = spec.factor(f);
    if (fs.kind == FactorKind::kInt) {
      Scalar q = radius / fs.weight;
      mpz_class bound;
      mpz_fdiv_q(bound.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
      long b = bound.get_si();
      std::vector<Scalar> r;
      for (long v = -b; v <= b; ++v) r.emplace_back(v);
      ranges.push_back(std::move(r));
      space *= static_cast<long double>(2 * b + 1);
    } else {
      for (int m : fs.moduli) {
        std::vector<Scalar> r;
        for (int v = 0; v < m; ++v) r.emplace_back(v);
        ranges.push_back(std::move(r));
        space *= m;
      }
    }
  }
  if (space > static_cast<long double>(budget)) {
    throw Error(ErrorCode::kBudgetExceeded, "norm ball exceeds budget " + std::to_string(budget));
  }
  std::vector<GroupElement> out;
  std::vector<std::size_t> pos(ranges.size(), 0);
  for (;;) {
    GroupElement x;
    for (std::size_t k = 0; k < ranges.size(); ++k) x.coords.push_back(ranges[k][pos[k]]);
    if (norm(spec, x) <= radius) out.push_back(std::move(x));
    std::size_t k = ranges.size();
    while (k > 0 && pos[k - 1] + 1 == ranges[k - 1].size()) pos[--k] = 0;
    if (k == 0) break;
    ++pos[k - 1];
  }
  return out;
}

struct IndecomposableCheck {
  bool indecomposable = true;
  std::optional<GroupElement> witness;  // h with |h| + |g - h| = |g|, h not in {0, g}
};

// Any witness satisfies |h| <= |g|, so the ball of radius |g| is exhaustive.
inline IndecomposableCheck is_indecomposable(const GroupSpec& spec, const GroupElement& g,
                                             std::uint64_t budget = 50'000'000) {
  require_conforms(spec, g);
  const Scalar ng = norm(spec, g);
  for (const GroupElement& h : ball_elements(spec, ng, budget)) {
    if (is_zero(h) || h == g) continue;
    if (norm(spec, h) + norm(spec, sub(spec, g, h)) == ng) return {false, h};
  }
  return {};
}

// Representative of {g, -g}: the first nonzero Z coordinate positive; for
// torsion elements the lexicographically smaller residue vector.
inline GroupElement canonical_representative(const GroupSpec& spec, const GroupElement& g) {
  for (std::size_t f = 0; f < spec.factor_count(); ++f) {
    if (spec.factor(f).kind == FactorKind::kMod) continue;
    const Scalar& c = g.coords[spec.offset(f)];
    if (c > 0) return g;
    if (c < 0) return neg(spec, g);
  }
  GroupElement m = neg(spec, g);
  return m < g ? m : g;
}

struct IndecomposableEntry {
  GroupElement element;
  std::optional<std::int64_t> order;  // nullopt: infinite
};

struct IndecomposableSet {
  std::vector<IndecomposableEntry> entries;
};

// For infinite specs a ball radius is required.
inline IndecomposableSet list_indecomposables(const GroupSpec& spec,
                                              std::optional<Scalar> radius = std::nullopt,
                                              std::uint64_t budget = 50'000'000) {
  std::vector<GroupElement> pool;
  if (spec.is_finite()) {
    pool = enumerate_elements(spec);
  } else {
    if (!radius) throw Error(ErrorCode::kInfiniteGroup, "infinite group needs a search radius");
    pool = ball_elements(spec, *radius, budget);
  }
  IndecomposableSet out;
  for (const GroupElement& g : pool) {
    if (is_zero(g) || !(canonical_representative(spec, g) == g)) continue;
    if (!is_indecomposable(spec, g, budget).indecomposable) continue;
    out.entries.push_back({g, element_order(spec, g)});
  }
  return out;
}

struct LawReport {
  bool ok = true;
  char law = 0;  // 'a', 'b', 'c' or 'p' (pairwise) on failure
  std::string message;
  std::vector<GroupElement> witnesses;
  std::optional<long> minimizer;
  std::optional<GroupElement> residual;
};

namespace detail {

inline void require_indecomposable(const GroupSpec& spec, const GroupElement& g, std::uint64_t budget) {
  IndecomposableCheck c = is_indecomposable(spec, g, budget);
  if (!c.indecomposable) {
    throw Error(ErrorCode::kNotIndecomposable,
                element_label(g) + " decomposes via " + element_label(*c.witness));
  }
}

inline LawReport law_failure(char law, std::string message, std::vector<GroupElement> witnesses) {
  LawReport r;
  r.ok = false;
  r.law = law;
  r.message = std::move(message);
  r.witnesses = std::move(witnesses);
  return r;
}

}  // namespace detail

// Checks, for indecomposable g: (a) |ng| = n|g| for n <= n_max unless 2g = 0;
// (b) a unique minimizer n of |h - ng| (unique modulo the order of g);
// (c) |mg + r| = |mg| + |r| for the residual r = h - ng and |m| <= n_max.
inline LawReport verify_indecomposable_laws(const GroupSpec& spec, const GroupElement& g,
                                            const GroupElement& h, int n_max,
                                            std::uint64_t budget = 50'000'000) {
  require_conforms(spec, h);
  if (is_zero(g)) throw Error(ErrorCode::kNotIndecomposable, "zero is not indecomposable");
  detail::require_indecomposable(spec, g, budget);
  const Scalar ng = norm(spec, g);
  const std::optional<std::int64_t> order = element_order(spec, g);
  const bool involution = order && *order == 2;

  if (!involution) {
    for (long n = 2; n <= n_max; ++n) {
      GroupElement x = multiple(spec, n, g);
      Scalar lhs = norm(spec, x);
      if (lhs != n * ng) {
        return detail::law_failure(
            'a',
            "|" + std::to_string(n) + "*" + element_label(g) + "| = " + to_string(lhs) +
                " != " + to_string(Scalar(n * ng)),
            {g, x});
      }
    }
  }

  // Candidates for the minimizer: one period for torsion g. Otherwise
  // |h - ng| <= |h| forces |ng| <= 2|h|, and |ng| >= |n| times the norm of
  // the free part of g, which bounds |n|.
  const Scalar nh = norm(spec, h);
  std::vector<long> candidates;
  if (order) {
    for (long n = 0; n < *order; ++n) candidates.push_back(n);
  } else {
    Scalar free_norm = 0;
    for (std::size_t f = 0; f < spec.factor_count(); ++f) {
      if (spec.factor(f).kind != FactorKind::kMod) free_norm += factor_norm(spec, f, g);
    }
    Scalar q = 2 * nh / free_norm;
    mpz_class bound;
    mpz_fdiv_q(bound.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    if (bound > budget) throw Error(ErrorCode::kBudgetExceeded, "minimizer search exceeds budget");
    for (long n = -bound.get_si(); n <= bound.get_si(); ++n) candidates.push_back(n);
  }
  std::optional<Scalar> best;
  std::vector<long> argmin;
  for (long n : candidates) {
    Scalar v = norm(spec, sub(spec, h, multiple(spec, n, g)));
    if (!best || v < *best) {
      best = v;
      argmin = {n};
    } else if (v == *best) {
      argmin.push_back(n);
    }
  }
  std::sort(argmin.begin(), argmin.end());
  if (argmin.size() != 1) {
    std::vector<GroupElement> w;
    for (long n : argmin) w.push_back(multiple(spec, n, g));
    return detail::law_failure('b', "minimizer of |h - n g| is not unique", std::move(w));
  }
  const long n0 = argmin.front();
  const GroupElement residual = sub(spec, h, multiple(spec, n0, g));
  const Scalar nr = norm(spec, residual);
  for (long m = -n_max; m <= n_max; ++m) {
    GroupElement mg = multiple(spec, m, g);
    Scalar lhs = norm(spec, add(spec, mg, residual));
    Scalar rhs = norm(spec, mg) + nr;
    if (lhs != rhs) {
      LawReport r = detail::law_failure(
          'c', "|" + std::to_string(m) + "g + r| = " + to_string(lhs) + " != " + to_string(rhs),
          {mg, residual});
      r.minimizer = n0;
      r.residual = residual;
      return r;
    }
  }
  LawReport r;
  r.minimizer = n0;
  r.residual = residual;
  return r;
}

namespace detail {

// x in <y>, looking at multiples k y with |k| up to bound.
inline bool in_cyclic(const GroupSpec& spec, const GroupElement& x, const GroupElement& y, long bound) {
  for (long k = -bound; k <= bound; ++k) {
    if (multiple(spec, k, y) == x) return true;
  }
  return false;
}

}  // namespace detail

// For indecomposable g, h generating different subgroups: |kg + lh| =
// |kg| + |lh| and kg + lh = 0 only when kg = lh = 0, for |k|, |l| <= k_max.
inline LawReport verify_pairwise_l1(const GroupSpec& spec, const GroupElement& g, const GroupElement& h,
                                    int k_max, std::uint64_t budget = 50'000'000) {
  detail::require_indecomposable(spec, g, budget);
  detail::require_indecomposable(spec, h, budget);
  long bound = k_max;
  for (const auto& x : {g, h}) {
    if (auto o = element_order(spec, x)) bound = std::max<long>(bound, *o);
  }
  if (detail::in_cyclic(spec, h, g, bound) && detail::in_cyclic(spec, g, h, bound)) {
    throw Error(ErrorCode::kSameSubgroup, element_label(g) + " and " + element_label(h) +
                                              " generate the same subgroup");
  }
  for (long k = -k_max; k <= k_max; ++k) {
    GroupElement kg = multiple(spec, k, g);
    for (long l = -k_max; l <= k_max; ++l) {
      GroupElement lh = multiple(spec, l, h);
      GroupElement s = add(spec, kg, lh);
      Scalar lhs = norm(spec, s);
      Scalar rhs = norm(spec, kg) + norm(spec, lh);
      if (lhs != rhs) {
        return detail::law_failure('p',
                                   "|" + std::to_string(k) + "g + " + std::to_string(l) +
                                       "h| = " + to_string(lhs) + " != " + to_string(rhs),
                                   {kg, lh});
      }
      if (is_zero(s) && !is_zero(kg)) {
        return detail::law_failure('p',
                                   std::to_string(k) + "g + " + std::to_string(l) +
                                       "h = 0 with nonzero terms",
                                   {kg, lh});
      }
    }
  }
  return {};
}

// Integer lattice points for torsion-free samples.
struct IntVec {
  std::vector<long> v;

  friend IntVec operator+(const IntVec& a, const IntVec& b) {
    IntVec r = a;
    for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] += b.v.at(i);
    return r;
  }
  friend IntVec operator-(const IntVec& a) {
    IntVec r = a;
    for (long& x : r.v) x = -x;
    return r;
  }
  friend IntVec operator-(const IntVec& a, const IntVec& b) { return a + (-b); }
  friend IntVec operator*(long k, const IntVec& a) {
    IntVec r = a;
    for (long& x : r.v) x *= k;
    return r;
  }
  bool is_zero() const {
    for (long x : v) {
      if (x != 0) return false;
    }
    return true;
  }
  friend bool operator==(const IntVec&, const IntVec&) = default;
  friend auto operator<=>(const IntVec&, const IntVec&) = default;
};

inline std::string element_label(const IntVec& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(x.v[i]);
  }
  return s + ")";
}

template <class E>
using NormOracle = std::function<Scalar(const E&)>;

// a ~ b when |a - b| < |a| + |b|.
template <class E>
bool similar(const NormOracle<E>& nrm, const E& a, const E& b) {
  return nrm(a - b) < nrm(a) + nrm(b);
}

template <class E>
struct SignClassification {
  E base;
  std::map<E, int> sign;  // +1 or -1 per nonzero sample
  std::map<E, Scalar> phi;
};

template <class E>
SignClassification<E> classify_signs(const NormOracle<E>& nrm, const std::vector<E>& elements,
                                     const E& base) {
  SignClassification<E> out;
  out.base = base;
  for (const E& a : elements) {
    if (a.is_zero()) continue;
    bool plus = similar(nrm, a, base);
    bool minus = similar(nrm, a, -base);
    if (plus == minus) {
      throw Error(ErrorCode::kInconsistentClasses,
                  element_label(a) + (plus ? " is similar to both " : " is similar to neither ") +
                      element_label(base) + " and its negative");
    }
    out.sign[a] = plus ? 1 : -1;
    out.phi[a] = plus ? nrm(a) : Scalar(-nrm(a));
  }
  return out;
}

struct SignLawReport {
  bool ok = true;
  std::string message;
};

// Sample-scale checks: phi odd, ~ transitive, phi additive on sums inside the
// sample, and a ~ b iff ma ~ nb for 1 <= m, n <= 4.
template <class E>
SignLawReport verify_sign_laws(const NormOracle<E>& nrm, const SignClassification<E>& cls) {
  auto fail = [](std::string m) { return SignLawReport{false, std::move(m)}; };
  std::vector<E> xs;
  for (const auto& [a, s] : cls.sign) xs.push_back(a);
  for (const E& a : xs) {
    auto it = cls.phi.find(-a);
    if (it != cls.phi.end() && it->second != -cls.phi.at(a)) {
      return fail("phi(-a) != -phi(a) at " + element_label(a));
    }
  }
  for (const E& a : xs) {
    for (const E& b : xs) {
      bool ab = similar(nrm, a, b);
      if (ab != (cls.sign.at(a) == cls.sign.at(b))) {
        return fail("similarity disagrees with classes at " + element_label(a) + ", " + element_label(b));
      }
      for (long m = 1; m <= 4; ++m) {
        for (long n = 1; n <= 4; ++n) {
          if (similar(nrm, m * a, n * b) != ab) {
            return fail("scaling changes similarity at " + element_label(a) + ", " + element_label(b));
          }
        }
      }
      auto it = cls.phi.find(a + b);
      if (it != cls.phi.end() && it->second != cls.phi.at(a) + cls.phi.at(b)) {
        return fail("phi not additive at " + element_label(a) + " + " + element_label(b));
      }
    }
  }
  return {};
}

}  // namespace gcot

#endif  // GCOT_STRUCTURE_HPP_
