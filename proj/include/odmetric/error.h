#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace odmetric {

// Base class for every recoverable failure raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Log or submission file rejected. `line` is 1-based.
class ParseError : public Error {
 public:
  enum class Kind { kSyntax, kSchema, kInvariant };

  ParseError(Kind kind, std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what),
        kind_(kind),
        line_(line),
        detail_(what) {}

  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }
  const std::string& detail() const { return detail_; }

 private:
  Kind kind_;
  std::size_t line_;
  std::string detail_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// A false-positive rate was requested over zero clear operating hours.
class NoExposureError : public Error {
 public:
  NoExposureError() : Error("no exposure: total clear hours must be > 0") {}
};

// No curve point satisfies the requested false-positive budget.
class BudgetInfeasible : public Error {
 public:
  explicit BudgetInfeasible(double budget_per_h)
      : Error("budget infeasible: no operating point with fp_per_h <= " +
              std::to_string(budget_per_h)),
        budget_per_h_(budget_per_h) {}

  double budget_per_h() const { return budget_per_h_; }

 private:
  double budget_per_h_;
};

// Detection happened beyond the braking distance, so no impact occurs.
class CollisionAvoided : public Error {
 public:
  CollisionAvoided() : Error("collision avoided: detection beyond braking distance") {}
};

}  // namespace odmetric
