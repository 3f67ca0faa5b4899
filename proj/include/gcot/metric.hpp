#ifndef GCOT_METRIC_HPP_
#define GCOT_METRIC_HPP_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "gcot/error.hpp"
#include "gcot/group.hpp"
#include "gcot/rational.hpp"

namespace gcot {

using Matrix = std::vector<std::vector<Scalar>>;

// Raised with the offending triple: d(i,k) > d(i,j) + d(j,k).
class TriangleViolationError : public Error {
 public:
  TriangleViolationError(int i, int k, int j, const std::string& what)
      : Error(ErrorCode::kTriangleViolation, what), i_(i), k_(k), j_(j) {}
  int i() const { return i_; }
  int k() const { return k_; }
  // Intermediate point.
  int j() const { return j_; }

 private:
  int i_, k_, j_;
};

// Validated finite metric space on points 0..n-1.
class FiniteMetric {
 public:
  FiniteMetric() = default;

  // Validation order: shape, diagonal, sign, zero off-diagonal, symmetry,
  // triangle inequality (first (i,k,j) in lexicographic order).
  static FiniteMetric FromMatrix(Matrix d) {
    const std::size_t n = d.size();
    for (const auto& row : d) {
      if (row.size() != n) throw Error(ErrorCode::kNotSquare, "distance matrix is not square");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (d[i][i] != 0) {
        throw Error(ErrorCode::kNonZeroDiagonal, "d(" + std::to_string(i) + "," +
                                                     std::to_string(i) + ") != 0");
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (d[i][j] < 0) {
          throw Error(ErrorCode::kNegativeDistance,
                      "d(" + std::to_string(i) + "," + std::to_string(j) + ") < 0");
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && d[i][j] == 0) {
          throw Error(ErrorCode::kZeroOffDiagonal,
                      "d(" + std::to_string(i) + "," + std::to_string(j) + ") = 0");
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (d[i][j] != d[j][i]) {
          throw Error(ErrorCode::kAsymmetricMatrix,
                      "d(" + std::to_string(i) + "," + std::to_string(j) + ") != d(" +
                          std::to_string(j) + "," + std::to_string(i) + ")");
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
          if (d[i][k] > d[i][j] + d[j][k]) {
            throw TriangleViolationError(
                static_cast<int>(i), static_cast<int>(k), static_cast<int>(j),
                "d(" + std::to_string(i) + "," + std::to_string(k) + ") = " + to_string(d[i][k]) +
                    " > d(" + std::to_string(i) + "," + std::to_string(j) + ") + d(" +
                    std::to_string(j) + "," + std::to_string(k) + ") = " +
                    to_string(d[i][j] + d[j][k]));
          }
        }
      }
    }
    FiniteMetric m;
    m.d_ = std::move(d);
    return m;
  }

  int size() const { return static_cast<int>(d_.size()); }
  const Scalar& operator()(int i, int j) const { return d_[i][j]; }
  const Matrix& matrix() const { return d_; }

  // Restriction to the listed points, in the listed order.
  FiniteMetric restrict_to(const std::vector<int>& points) const {
    FiniteMetric m;
    m.d_.assign(points.size(), std::vector<Scalar>(points.size()));
    for (std::size_t a = 0; a < points.size(); ++a) {
      for (std::size_t b = 0; b < points.size(); ++b) m.d_[a][b] = d_.at(points[a]).at(points[b]);
    }
    return m;
  }

  // Every distance multiplied by t > 0.
  FiniteMetric scaled(const Scalar& t) const {
    FiniteMetric m = *this;
    for (auto& row : m.d_) {
      for (auto& x : row) x *= t;
    }
    return m;
  }

  friend bool operator==(const FiniteMetric& a, const FiniteMetric& b) { return a.d_ == b.d_; }

 private:
  Matrix d_;
};

inline FiniteMetric metric_from_matrix(Matrix d) { return FiniteMetric::FromMatrix(std::move(d)); }

enum class PointNorm { kL1, kLinf };

// Pairwise distances of a rational point cloud under the l1 or sup norm.
inline FiniteMetric metric_from_points(const std::vector<std::vector<Scalar>>& coords, PointNorm p) {
  const std::size_t n = coords.size();
  for (const auto& c : coords) {
    if (c.size() != coords.front().size()) {
      throw Error(ErrorCode::kDimensionMismatch, "points have different dimensions");
    }
  }
  Matrix d(n, std::vector<Scalar>(n, Scalar(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      Scalar dist = 0;
      for (std::size_t k = 0; k < coords[i].size(); ++k) {
        Scalar gap = abs_value(coords[i][k] - coords[j][k]);
        if (p == PointNorm::kL1) {
          dist += gap;
        } else if (gap > dist) {
          dist = gap;
        }
      }
      if (dist == 0) {
        throw Error(ErrorCode::kDuplicatePoint,
                    "points " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
      }
      d[i][j] = d[j][i] = dist;
    }
  }
  return FiniteMetric::FromMatrix(std::move(d));
}

// The geodesic metric of the complete graph on the points, with edge lengths
// given by d, agrees with d on the vertices; the finite model therefore loses
// nothing. Returned unchanged.
inline FiniteMetric complete_graph_metric(const FiniteMetric& d) { return d; }

// Transport instance: points of a finite metric, each carrying a group
// coefficient; coefficients sum to zero.
class Instance {
 public:
  Instance(FiniteMetric metric, GroupSpec group, std::vector<GroupElement> coeffs)
      : metric_(std::move(metric)), group_(std::move(group)), coeffs_(std::move(coeffs)) {
    if (static_cast<int>(coeffs_.size()) != metric_.size()) {
      throw Error(ErrorCode::kShapeMismatch, std::to_string(coeffs_.size()) +
                                                 " coefficients for " +
                                                 std::to_string(metric_.size()) + " points");
    }
    for (const GroupElement& g : coeffs_) require_conforms(group_, g);
    if (!is_zero(sum_elements(group_, coeffs_))) {
      throw Error(ErrorCode::kNonZeroSum, "coefficients do not sum to zero");
    }
  }

  const FiniteMetric& metric() const { return metric_; }
  const GroupSpec& group() const { return group_; }
  const std::vector<GroupElement>& coeffs() const { return coeffs_; }
  int size() const { return metric_.size(); }

  // The same points with coefficients projected onto factor f.
  Instance project_factor(std::size_t f) const {
    std::vector<GroupElement> c;
    c.reserve(coeffs_.size());
    for (const GroupElement& g : coeffs_) c.push_back(project(group_, f, g));
    return Instance(metric_, project_spec(group_, f), std::move(c));
  }

 private:
  FiniteMetric metric_;
  GroupSpec group_;
  std::vector<GroupElement> coeffs_;
};

}  // namespace gcot

#endif  // GCOT_METRIC_HPP_
