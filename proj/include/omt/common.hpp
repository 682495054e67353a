#pragma once
// Shared error type and numeric tolerances used across the library.
//
// All comparisons against "exact" combinatorial quantities (objective values,
// strong duality, lifted-assignment feasibility) use the tolerances below so
// that every module agrees on what counts as equal.

#include <stdexcept>
#include <string>

namespace omt {

// Raised when input data or a candidate solution violates a documented
// precondition; `condition` names the specific requirement that failed.
class OmtError : public std::runtime_error {
 public:
  OmtError(std::string condition, const std::string& detail)
      : std::runtime_error(condition + ": " + detail),
        condition_(std::move(condition)) {}
  const std::string& condition() const { return condition_; }

 private:
  std::string condition_;
};

// Feasibility tolerance for constraint rows and variable bounds.
inline constexpr double kFeasTol = 1e-7;
// Optimality / strong-duality tolerance for LP solves and Benders bounds.
inline constexpr double kOptTol = 1e-6;
// Relative tolerance when comparing objective values between routes.
inline constexpr double kObjTol = 1e-9;

}  // namespace omt
