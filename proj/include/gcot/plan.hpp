#ifndef GCOT_PLAN_HPP_
#define GCOT_PLAN_HPP_

#include <optional>
#include <string>
#include <vector>

#include "gcot/error.hpp"
#include "gcot/group.hpp"
#include "gcot/metric.hpp"

namespace gcot {

// Group-valued transport plan: entry (i, j) is the quantity moving from point
// i to point j. Feasible plans are antisymmetric with zero diagonal and row
// sums equal to the instance coefficients.
struct TransportPlan {
  GroupSpec group;
  std::vector<std::vector<GroupElement>> entries;
  // Known once the plan has been evaluated against a metric.
  std::optional<Scalar> cost;
  // flow | parity | brute | decomposed | construct | search | chain
  std::string method;

  int size() const { return static_cast<int>(entries.size()); }
  const GroupElement& at(int i, int j) const { return entries.at(i).at(j); }

  // Sets entry (i, j) to g and (j, i) to -g.
  void set(int i, int j, const GroupElement& g) {
    entries.at(i).at(j) = g;
    entries.at(j).at(i) = neg(group, g);
  }
};

inline TransportPlan zero_plan(const GroupSpec& group, int n) {
  TransportPlan p;
  p.group = group;
  p.entries.assign(n, std::vector<GroupElement>(n, zero(group)));
  return p;
}

inline GroupElement row_sum(const TransportPlan& plan, int i) {
  return sum_elements(plan.group, plan.entries.at(i));
}

// Sum over i < j of |g_ij| d(i, j).
inline Scalar plan_cost(const TransportPlan& plan, const FiniteMetric& metric) {
  if (plan.size() != metric.size()) {
    throw Error(ErrorCode::kShapeMismatch, "plan has " + std::to_string(plan.size()) +
                                               " points, metric has " +
                                               std::to_string(metric.size()));
  }
  Scalar total = 0;
  for (int i = 0; i < plan.size(); ++i) {
    if (static_cast<int>(plan.entries[i].size()) != plan.size()) {
      throw Error(ErrorCode::kShapeMismatch, "plan matrix is not square");
    }
    for (int j = i + 1; j < plan.size(); ++j) total += norm(plan.group, plan.at(i, j)) * metric(i, j);
  }
  return total;
}

// Empty when plan is feasible for the coefficients (metric-free); otherwise
// the first failed condition.
inline std::string feasibility_error(const TransportPlan& plan, const GroupSpec& group,
                                     const std::vector<GroupElement>& coeffs) {
  if (!(plan.group == group)) return "plan group differs from instance group";
  const int n = static_cast<int>(coeffs.size());
  if (plan.size() != n) return "plan size differs from instance size";
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(plan.entries[i].size()) != n) return "plan matrix is not square";
    for (int j = 0; j < n; ++j) {
      std::string why = conformance_error(plan.group, plan.at(i, j));
      if (!why.empty()) return "entry (" + std::to_string(i) + "," + std::to_string(j) + "): " + why;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!is_zero(plan.at(i, i))) return "diagonal entry " + std::to_string(i) + " is nonzero";
    for (int j = i + 1; j < n; ++j) {
      if (!(plan.at(i, j) == neg(plan.group, plan.at(j, i)))) {
        return "entries (" + std::to_string(i) + "," + std::to_string(j) + ") and (" +
               std::to_string(j) + "," + std::to_string(i) + ") are not opposite";
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    GroupElement r = row_sum(plan, i);
    if (!(r == coeffs[i])) {
      return "row " + std::to_string(i) + " sums to " + element_label(r) + " instead of " +
             element_label(coeffs[i]);
    }
  }
  return {};
}

inline std::string feasibility_error(const TransportPlan& plan, const Instance& inst) {
  return feasibility_error(plan, inst.group(), inst.coeffs());
}

inline bool is_feasible(const TransportPlan& plan, const Instance& inst) {
  return feasibility_error(plan, inst).empty();
}

}  // namespace gcot

#endif  // GCOT_PLAN_HPP_
