#ifndef GCOT_FOURIER_MOTZKIN_HPP_
#define GCOT_FOURIER_MOTZKIN_HPP_

// Exact feasibility of small rational linear systems by variable elimination:
// equalities are used for substitution, inequalities are combined pairwise.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <vector>

#include "gcot/error.hpp"
#include "gcot/rational.hpp"

namespace gcot {

struct LinearConstraint {
  std::vector<Scalar> coeffs;
  Scalar rhs;
  bool equality = false;  // coeffs . x == rhs, else coeffs . x <= rhs

  friend bool operator<(const LinearConstraint& a, const LinearConstraint& b) {
    if (a.equality != b.equality) return a.equality < b.equality;
    if (a.coeffs != b.coeffs) return a.coeffs < b.coeffs;
    return a.rhs < b.rhs;
  }
};

class LinearSystem {
 public:
  explicit LinearSystem(std::size_t vars) : vars_(vars) {}

  std::size_t vars() const { return vars_; }
  const std::vector<LinearConstraint>& constraints() const { return rows_; }

  void add_le(std::vector<Scalar> a, Scalar b) { rows_.push_back({std::move(a), std::move(b), false}); }
  void add_ge(std::vector<Scalar> a, Scalar b) {
    for (Scalar& x : a) x = -x;
    rows_.push_back({std::move(a), -b, false});
  }
  void add_eq(std::vector<Scalar> a, Scalar b) { rows_.push_back({std::move(a), std::move(b), true}); }

  bool feasible() const {
    std::vector<LinearConstraint> rows = rows_;
    for (std::size_t v = vars_; v-- > 0;) {
      if (!eliminate(rows, v)) return false;
    }
    return true;
  }

  // Lexicographically smallest solution (minimize x0, then x1, ...), or
  // nullopt when infeasible. Throws when some coordinate is unbounded below.
  std::optional<std::vector<Scalar>> lex_min() const {
    std::vector<LinearConstraint> fixed = rows_;
    std::vector<Scalar> x(vars_);
    for (std::size_t k = 0; k < vars_; ++k) {
      std::vector<LinearConstraint> rows = fixed;
      for (std::size_t v = vars_; v-- > k + 1;) {
        if (!eliminate(rows, v)) return std::nullopt;
      }
      std::optional<Scalar> lower, exact;
      for (const LinearConstraint& c : rows) {
        const Scalar& a = c.coeffs[k];
        if (a == 0) {
          if (c.equality ? c.rhs != 0 : c.rhs < 0) return std::nullopt;
          continue;
        }
        Scalar bound = c.rhs / a;
        if (c.equality) {
          if (exact && *exact != bound) return std::nullopt;
          exact = bound;
        } else if (a < 0 && (!lower || bound > *lower)) {
          lower = bound;
        }
      }
      if (exact) {
        x[k] = *exact;
      } else if (lower) {
        x[k] = *lower;
      } else {
        throw Error(ErrorCode::kInvalidInput, "variable " + std::to_string(k) + " is unbounded below");
      }
      for (LinearConstraint& c : fixed) {
        c.rhs -= c.coeffs[k] * x[k];
        c.coeffs[k] = 0;
      }
    }
    // Earlier choices are minimal bounds of closed projections, so the
    // remaining system must stay feasible; confirm anyway.
    for (const LinearConstraint& c : fixed) {
      if (c.equality ? c.rhs != 0 : c.rhs < 0) return std::nullopt;
    }
    return x;
  }

 private:
  // Scales so the first nonzero coefficient has absolute value 1 (sign kept
  // for inequalities, made positive for equalities).
  static void normalize(LinearConstraint& c) {
    for (const Scalar& a : c.coeffs) {
      if (a == 0) continue;
      Scalar s = abs_value(a);
      if (c.equality && a < 0) s = -s;
      for (Scalar& x : c.coeffs) x /= s;
      c.rhs /= s;
      return;
    }
  }

  // Removes variable v; false when a constant contradiction appears.
  static bool eliminate(std::vector<LinearConstraint>& rows, std::size_t v) {
    auto pivot = std::find_if(rows.begin(), rows.end(),
                              [&](const LinearConstraint& c) { return c.equality && c.coeffs[v] != 0; });
    std::vector<LinearConstraint> next;
    if (pivot != rows.end()) {
      LinearConstraint e = *pivot;
      for (auto it = rows.begin(); it != rows.end(); ++it) {
        if (it == pivot) continue;
        LinearConstraint c = *it;
        if (c.coeffs[v] != 0) {
          Scalar f = c.coeffs[v] / e.coeffs[v];
          for (std::size_t j = 0; j < c.coeffs.size(); ++j) c.coeffs[j] -= f * e.coeffs[j];
          c.rhs -= f * e.rhs;
        }
        next.push_back(std::move(c));
      }
    } else {
      std::vector<const LinearConstraint*> up, down;
      for (const LinearConstraint& c : rows) {
        if (c.coeffs[v] > 0) {
          up.push_back(&c);
        } else if (c.coeffs[v] < 0) {
          down.push_back(&c);
        } else {
          next.push_back(c);
        }
      }
      for (const LinearConstraint* p : up) {
        for (const LinearConstraint* q : down) {
          Scalar fp = -q->coeffs[v];
          Scalar fq = p->coeffs[v];
          LinearConstraint c{std::vector<Scalar>(p->coeffs.size()), fp * p->rhs + fq * q->rhs, false};
          for (std::size_t j = 0; j < c.coeffs.size(); ++j) {
            c.coeffs[j] = fp * p->coeffs[j] + fq * q->coeffs[j];
          }
          c.coeffs[v] = 0;
          next.push_back(std::move(c));
        }
      }
    }
    std::set<LinearConstraint> unique;
    for (LinearConstraint& c : next) {
      bool constant = std::all_of(c.coeffs.begin(), c.coeffs.end(), [](const Scalar& a) { return a == 0; });
      if (constant) {
        if (c.equality ? c.rhs != 0 : c.rhs < 0) return false;
        continue;
      }
      normalize(c);
      unique.insert(std::move(c));
    }
    rows.assign(unique.begin(), unique.end());
    return true;
  }

  std::size_t vars_;
  std::vector<LinearConstraint> rows_;
};

}  // namespace gcot

#endif  // GCOT_FOURIER_MOTZKIN_HPP_
