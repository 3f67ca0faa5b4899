#ifndef GCOT_POLYTOPE_HPP_
#define GCOT_POLYTOPE_HPP_

// Norms on Q^d whose unit ball is a centrally symmetric polytope, given by
// its vertices. The gauge of x is min sum t_k over t >= 0 with V t = x.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gcot/error.hpp"
#include "gcot/lp.hpp"
#include "gcot/rational.hpp"

namespace gcot {

using Vec = std::vector<Scalar>;

inline std::string vec_label(const Vec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += to_string(v[i]);
  }
  return s + ")";
}

class PolytopeNorm {
 public:
  explicit PolytopeNorm(std::vector<Vec> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.empty()) throw Error(ErrorCode::kInvalidInput, "polytope needs vertices");
    dim_ = vertices_.front().size();
    for (const Vec& v : vertices_) {
      if (v.size() != dim_) throw Error(ErrorCode::kDimensionMismatch, "vertices differ in dimension");
    }
    for (const Vec& v : vertices_) {
      Vec m = v;
      for (Scalar& x : m) x = -x;
      if (std::find(vertices_.begin(), vertices_.end(), m) == vertices_.end()) {
        throw Error(ErrorCode::kInvalidInput, "vertex set is not symmetric: missing " + vec_label(m));
      }
    }
    if (matrix_rank(vertices_) != dim_) {
      throw Error(ErrorCode::kInvalidInput, "polytope is not full-dimensional");
    }
  }

  const std::vector<Vec>& vertices() const { return vertices_; }
  std::size_t dim() const { return dim_; }

  Scalar gauge(const Vec& x) const {
    if (x.size() != dim_) throw Error(ErrorCode::kDimensionMismatch, "point has wrong dimension");
    std::vector<std::vector<Scalar>> a(dim_, std::vector<Scalar>(vertices_.size()));
    for (std::size_t r = 0; r < dim_; ++r) {
      for (std::size_t k = 0; k < vertices_.size(); ++k) a[r][k] = vertices_[k][r];
    }
    LpResult lp = solve_lp(a, x, Vec(vertices_.size(), Scalar(1)));
    return lp.value;  // full-dimensional symmetric hull: always feasible and bounded
  }

  // p is extreme when it lies in the list and outside the hull of the rest.
  bool is_extreme(const Vec& p) const {
    if (std::find(vertices_.begin(), vertices_.end(), p) == vertices_.end()) return false;
    std::vector<Vec> others;
    for (const Vec& v : vertices_) {
      if (v != p) others.push_back(v);
    }
    if (others.empty()) return true;
    std::vector<std::vector<Scalar>> a(dim_ + 1, std::vector<Scalar>(others.size()));
    Vec b(dim_ + 1);
    for (std::size_t r = 0; r < dim_; ++r) {
      for (std::size_t k = 0; k < others.size(); ++k) a[r][k] = others[k][r];
      b[r] = p[r];
    }
    for (std::size_t k = 0; k < others.size(); ++k) a[dim_][k] = 1;
    b[dim_] = 1;
    return solve_lp(a, b, Vec(others.size(), Scalar(0))).status == LpStatus::kInfeasible;
  }

 private:
  std::vector<Vec> vertices_;
  std::size_t dim_ = 0;
};

struct ExtremeConditionResult {
  bool ok = true;
  Vec combination;      // sum lambda_i p_i
  Scalar combined_norm;  // gauge of the combination
  Scalar weighted_sum;   // sum |lambda_i| gauge(p_i)
};

// For linearly independent extreme points p_i and nonzero lambda_i, NBP
// requires |sum lambda_i p_i| = sum |lambda_i| |p_i|. Reports either equality
// or the strict inequality as a witness.
inline ExtremeConditionResult check_l1_extreme_condition(const PolytopeNorm& norm,
                                                         const std::vector<Vec>& pts,
                                                         const std::vector<Scalar>& lambdas) {
  if (pts.size() != lambdas.size()) {
    throw Error(ErrorCode::kShapeMismatch, "points and coefficients differ in count");
  }
  for (const Vec& p : pts) {
    if (p.size() != norm.dim()) throw Error(ErrorCode::kDimensionMismatch, "point has wrong dimension");
    if (!norm.is_extreme(p)) throw Error(ErrorCode::kNotExtreme, vec_label(p) + " is not an extreme point");
  }
  for (const Scalar& l : lambdas) {
    if (l == 0) throw Error(ErrorCode::kInvalidInput, "coefficients must be nonzero");
  }
  if (matrix_rank(pts) != pts.size()) {
    throw Error(ErrorCode::kDependentPoints, "points are linearly dependent");
  }
  ExtremeConditionResult r;
  r.combination.assign(norm.dim(), Scalar(0));
  r.weighted_sum = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t k = 0; k < norm.dim(); ++k) r.combination[k] += lambdas[i] * pts[i][k];
    r.weighted_sum += abs_value(lambdas[i]) * norm.gauge(pts[i]);
  }
  r.combined_norm = norm.gauge(r.combination);
  r.ok = r.combined_norm == r.weighted_sum;
  return r;
}

}  // namespace gcot

#endif  // GCOT_POLYTOPE_HPP_
