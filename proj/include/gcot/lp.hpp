#ifndef GCOT_LP_HPP_
#define GCOT_LP_HPP_

// Exact two-phase simplex with Bland's rule: minimize c.x subject to
// A x = b, x >= 0. Small dense problems only.

#include <cstddef>
#include <optional>
#include <vector>

#include "gcot/rational.hpp"

namespace gcot {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<Scalar> x;
  Scalar value = 0;
};

namespace detail {

class Tableau {
 public:
  // rows: constraint rows with rhs in the last column; basis: basic column per row.
  Tableau(std::vector<std::vector<Scalar>> rows, std::vector<std::size_t> basis, std::size_t cols)
      : rows_(std::move(rows)), basis_(std::move(basis)), cols_(cols) {}

  // Minimizes cost over allowed columns. Returns false when unbounded.
  bool optimize(const std::vector<Scalar>& cost, const std::vector<bool>& allowed) {
    for (;;) {
      std::vector<Scalar> reduced = reduced_costs(cost);
      std::size_t enter = cols_;
      for (std::size_t c = 0; c < cols_; ++c) {
        if (allowed[c] && reduced[c] < 0) {
          enter = c;
          break;
        }
      }
      if (enter == cols_) return true;
      std::size_t leave = rows_.size();
      Scalar best_ratio;
      for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (rows_[r][enter] <= 0) continue;
        Scalar ratio = rows_[r][cols_] / rows_[r][enter];
        if (leave == rows_.size() || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r] < basis_[leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave == rows_.size()) return false;
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    Scalar p = rows_[r][c];
    for (Scalar& v : rows_[r]) v /= p;
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      if (k == r || rows_[k][c] == 0) continue;
      Scalar f = rows_[k][c];
      for (std::size_t j = 0; j <= cols_; ++j) rows_[k][j] -= f * rows_[r][j];
    }
    basis_[r] = c;
  }

  std::vector<Scalar> reduced_costs(const std::vector<Scalar>& cost) const {
    std::vector<Scalar> red = cost;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const Scalar& cb = cost[basis_[r]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j < cols_; ++j) red[j] -= cb * rows_[r][j];
    }
    return red;
  }

  std::vector<Scalar> solution() const {
    std::vector<Scalar> x(cols_, Scalar(0));
    for (std::size_t r = 0; r < rows_.size(); ++r) x[basis_[r]] = rows_[r][cols_];
    return x;
  }

  std::vector<std::vector<Scalar>>& rows() { return rows_; }
  std::vector<std::size_t>& basis() { return basis_; }

 private:
  std::vector<std::vector<Scalar>> rows_;
  std::vector<std::size_t> basis_;
  std::size_t cols_;
};

}  // namespace detail

inline LpResult solve_lp(const std::vector<std::vector<Scalar>>& a, const std::vector<Scalar>& b,
                         const std::vector<Scalar>& c) {
  const std::size_t m = a.size();
  const std::size_t n = c.size();
  const std::size_t cols = n + m;  // originals then one artificial per row
  std::vector<std::vector<Scalar>> rows(m, std::vector<Scalar>(cols + 1, Scalar(0)));
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) {
    bool flip = b[r] < 0;
    for (std::size_t j = 0; j < n; ++j) rows[r][j] = flip ? Scalar(-a[r][j]) : a[r][j];
    rows[r][n + r] = 1;
    rows[r][cols] = flip ? Scalar(-b[r]) : b[r];
    basis[r] = n + r;
  }
  detail::Tableau t(std::move(rows), std::move(basis), cols);

  std::vector<Scalar> phase1(cols, Scalar(0));
  for (std::size_t j = n; j < cols; ++j) phase1[j] = 1;
  t.optimize(phase1, std::vector<bool>(cols, true));
  std::vector<Scalar> x = t.solution();
  Scalar infeasibility = 0;
  for (std::size_t j = n; j < cols; ++j) infeasibility += x[j];
  LpResult result;
  if (infeasibility != 0) return result;

  // Drive artificials out of the basis where possible; rows left are redundant.
  for (std::size_t r = 0; r < m; ++r) {
    if (t.basis()[r] < n) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (t.rows()[r][j] != 0) {
        t.pivot(r, j);
        break;
      }
    }
  }

  std::vector<Scalar> cost(cols, Scalar(0));
  for (std::size_t j = 0; j < n; ++j) cost[j] = c[j];
  std::vector<bool> allowed(cols, false);
  for (std::size_t j = 0; j < n; ++j) allowed[j] = true;
  if (!t.optimize(cost, allowed)) {
    result.status = LpStatus::kUnbounded;
    return result;
  }
  x = t.solution();
  x.resize(n);
  result.status = LpStatus::kOptimal;
  for (std::size_t j = 0; j < n; ++j) result.value += c[j] * x[j];
  result.x = std::move(x);
  return result;
}

// Rank of a rational matrix by exact elimination.
inline std::size_t matrix_rank(std::vector<std::vector<Scalar>> m) {
  std::size_t rank = 0;
  const std::size_t cols = m.empty() ? 0 : m.front().size();
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < m.size() && m[pivot][c] == 0) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[pivot], m[rank]);
    for (std::size_t r = rank + 1; r < m.size(); ++r) {
      if (m[r][c] == 0) continue;
      Scalar f = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

}  // namespace gcot

#endif  // GCOT_LP_HPP_
