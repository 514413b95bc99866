#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace odmetric {

// Median human detection distances on railways, with one-sided entries
// ("<60", ">750") kept as bounds.
struct BenchmarkRow {
  enum class Bound { kExact, kBelow, kAbove };

  std::string object;     // obstacle class name or target description key
  std::string condition;  // "day", "night" or "accident_statistics"
  double median_m = 0.0;
  Bound bound = Bound::kExact;
  std::string description;
  std::string source;
};

class HumanBenchmark {
 public:
  explicit HumanBenchmark(std::vector<BenchmarkRow> rows);
  // Published median distances of human train drivers, 18 rows.
  static const HumanBenchmark& Published();

  const std::vector<BenchmarkRow>& rows() const { return rows_; }
  // nullptr if (object, condition) is not in the table.
  const BenchmarkRow* Find(const std::string& object,
                           const std::string& condition) const;

 private:
  std::vector<BenchmarkRow> rows_;
};

enum class ReferenceOutcome { kPass, kFail, kInconclusive };

const char* ToString(ReferenceOutcome outcome);

struct ClassVerdict {
  std::string object;
  std::string condition;
  double system_median_m = 0.0;
  double required_m = 0.0;
  BenchmarkRow::Bound bound = BenchmarkRow::Bound::kExact;
  ReferenceOutcome outcome = ReferenceOutcome::kFail;
};

struct ReferenceVerdict {
  std::vector<ClassVerdict> classes;
  bool pass = false;  // every class kPass
};

// Exact rows pass when the system median reaches the human median. "<b"
// rows pass from b on. For ">b" rows a system median at or below b fails and
// anything above is inconclusive, since the human value is unknown.
ClassVerdict CompareToRow(double system_median_m, const BenchmarkRow& row);

struct ReferenceQuery {
  std::string object;
  std::string condition;
  double system_median_m = 0.0;
};

// Throws std::invalid_argument when a queried row is missing.
ReferenceVerdict ReferenceCompare(const std::vector<ReferenceQuery>& queries,
                                  const HumanBenchmark& benchmark);

// `system_medians` keys are benchmark object names; every key is looked up
// under `condition`. Throws std::invalid_argument for a missing row.
ReferenceVerdict ReferenceCompare(const std::map<std::string, double>& system_medians,
                                  const HumanBenchmark& benchmark,
                                  const std::string& condition);

}  // namespace odmetric
