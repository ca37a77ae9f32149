#pragma once

#include <stdexcept>
#include <string>

namespace specgap {

struct BudgetExceeded : std::runtime_error {
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct ConvergenceError : std::runtime_error {
  ConvergenceError(const std::string& what, double lower, double upper)
      : std::runtime_error(what), bracket_lower(lower), bracket_upper(upper) {}
  double bracket_lower;
  double bracket_upper;
};

struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

struct GridError : std::runtime_error {
  explicit GridError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace specgap
