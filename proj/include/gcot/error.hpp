#ifndef GCOT_ERROR_HPP_
#define GCOT_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace gcot {

enum class ErrorCode {
  kInvalidInput,
  kShapeMismatch,
  kInvalidNorm,
  kInfiniteGroup,
  kNonZeroSum,
  kBudgetExceeded,
  kUnsupportedFactor,
  // metric construction
  kNotSquare,
  kNonZeroDiagonal,
  kAsymmetricMatrix,
  kNegativeDistance,
  kZeroOffDiagonal,
  kTriangleViolation,
  kDuplicatePoint,
  kDimensionMismatch,
  // analyzers
  kInfeasiblePlan,
  kNotZeroMean,
  kNotExtreme,
  kDependentPoints,
  kNotIndecomposable,
  kSameSubgroup,
  kInconsistentClasses,
  // chains
  kVertexOnBoundary,
  kPlanNotNbp,
  kPlanMismatch,
  kNoNbpPlanForStar,
  kBoundaryOutsideSet,
  // calibration
  kLipschitzViolation,
  kNotCalibrated,
};

inline std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kInvalidNorm: return "InvalidNorm";
    case ErrorCode::kInfiniteGroup: return "InfiniteGroup";
    case ErrorCode::kNonZeroSum: return "NonZeroSum";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kUnsupportedFactor: return "UnsupportedFactor";
    case ErrorCode::kNotSquare: return "NotSquare";
    case ErrorCode::kNonZeroDiagonal: return "NonZeroDiagonal";
    case ErrorCode::kAsymmetricMatrix: return "AsymmetricMatrix";
    case ErrorCode::kNegativeDistance: return "NegativeDistance";
    case ErrorCode::kZeroOffDiagonal: return "ZeroOffDiagonal";
    case ErrorCode::kTriangleViolation: return "TriangleViolation";
    case ErrorCode::kDuplicatePoint: return "DuplicatePoint";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInfeasiblePlan: return "InfeasiblePlan";
    case ErrorCode::kNotZeroMean: return "NotZeroMean";
    case ErrorCode::kNotExtreme: return "NotExtreme";
    case ErrorCode::kDependentPoints: return "DependentPoints";
    case ErrorCode::kNotIndecomposable: return "NotIndecomposable";
    case ErrorCode::kSameSubgroup: return "SameSubgroup";
    case ErrorCode::kInconsistentClasses: return "InconsistentClasses";
    case ErrorCode::kVertexOnBoundary: return "VertexOnBoundary";
    case ErrorCode::kPlanNotNbp: return "PlanNotNBP";
    case ErrorCode::kPlanMismatch: return "PlanMismatch";
    case ErrorCode::kNoNbpPlanForStar: return "NoNbpPlanForStar";
    case ErrorCode::kBoundaryOutsideSet: return "BoundaryOutsideSet";
    case ErrorCode::kLipschitzViolation: return "LipschitzViolation";
    case ErrorCode::kNotCalibrated: return "NotCalibrated";
  }
  return "Unknown";
}

// All library failures are reported as gcot::Error (or a subclass carrying a
// witness). Violations that are part of an operation's normal answer, such as
// a norm-axiom witness, are returned as values instead.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gcot

#endif  // GCOT_ERROR_HPP_
