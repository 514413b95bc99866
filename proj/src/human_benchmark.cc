#include "odmetric/human_benchmark.h"

#include <stdexcept>

namespace odmetric {
namespace {

using Bound = BenchmarkRow::Bound;

std::vector<BenchmarkRow> PublishedRows() {
  const std::string kTargets = "Polz, project KOMPAS";
  const std::string kCubes = "fluorescent objects at night, 60 km/h (Itoh)";
  const std::string kMockel = "Moeckel et al. 2003";
  const std::string kAccidents = "accident statistics (Nakasone et al. 2017)";
  return {
      {"target_0.4m2_2m2_c30", "day", 750, Bound::kAbove, "0.4 m2 and 2 m2, 30% contrast", kTargets},
      {"target_2m2_c8", "day", 500, Bound::kExact, "2 m2, 8% contrast", kTargets},
      {"target_0.4m2_c8", "day", 240, Bound::kExact, "0.4 m2, 8% contrast", kTargets},
      {"target_2m2_c30", "night", 180, Bound::kExact, "2 m2, 30% contrast, at night", kTargets},
      {"target_0.4m2_c30", "night", 60, Bound::kExact, "0.4 m2, 30% contrast, at night", kTargets},
      {"target_0.4m2_2m2_c8", "night", 60, Bound::kBelow,
       "0.4 m2 and 2 m2, 8% contrast, at night", kTargets},
      {"cube_40cm", "night", 250, Bound::kExact, "40x40x40 cm", kCubes},
      {"cube_20cm", "night", 175, Bound::kExact, "20x20x20 cm", kCubes},
      {"cube_10cm", "night", 50, Bound::kExact, "10x10x10 cm", kCubes},
      {"cube_5cm", "night", 25, Bound::kBelow, "5x5x5 cm", kCubes},
      {"person_safety_jacket", "day", 400, Bound::kExact, "person in safety jacket", kMockel},
      {"passenger_car", "day", 300, Bound::kExact, "passenger car", kMockel},
      {"person", "day", 240, Bound::kExact, "person", kMockel},
      {"passenger_car", "night", 60, Bound::kBelow, "passenger car at night", kMockel},
      {"person_safety_jacket", "night", 60, Bound::kBelow, "person in safety jacket at night",
       kMockel},
      {"person", "night", 60, Bound::kBelow, "person at night", kMockel},
      {"tree", "accident_statistics", 60, Bound::kExact, "trees, 50-70 km/h", kAccidents},
      {"rock", "accident_statistics", 30, Bound::kExact, "fallen rocks, 20-120 km/h", kAccidents},
  };
}

}  // namespace

HumanBenchmark::HumanBenchmark(std::vector<BenchmarkRow> rows) : rows_(std::move(rows)) {
  for (const BenchmarkRow& row : rows_) {
    if (!(row.median_m >= 0.0)) throw std::invalid_argument("benchmark distance must be >= 0");
  }
}

const HumanBenchmark& HumanBenchmark::Published() {
  static const HumanBenchmark benchmark(PublishedRows());
  return benchmark;
}

const BenchmarkRow* HumanBenchmark::Find(const std::string& object,
                                         const std::string& condition) const {
  for (const BenchmarkRow& row : rows_) {
    if (row.object == object && row.condition == condition) return &row;
  }
  return nullptr;
}

const char* ToString(ReferenceOutcome outcome) {
  switch (outcome) {
    case ReferenceOutcome::kPass: return "pass";
    case ReferenceOutcome::kFail: return "fail";
    case ReferenceOutcome::kInconclusive: return "inconclusive";
  }
  return "?";
}

ClassVerdict CompareToRow(double system_median_m, const BenchmarkRow& row) {
  ClassVerdict v;
  v.object = row.object;
  v.condition = row.condition;
  v.system_median_m = system_median_m;
  v.required_m = row.median_m;
  v.bound = row.bound;
  switch (row.bound) {
    case Bound::kExact:
    case Bound::kBelow:
      v.outcome = system_median_m >= row.median_m ? ReferenceOutcome::kPass : ReferenceOutcome::kFail;
      break;
    case Bound::kAbove:
      v.outcome = system_median_m > row.median_m ? ReferenceOutcome::kInconclusive
                                                 : ReferenceOutcome::kFail;
      break;
  }
  return v;
}

ReferenceVerdict ReferenceCompare(const std::vector<ReferenceQuery>& queries,
                                  const HumanBenchmark& benchmark) {
  ReferenceVerdict verdict;
  verdict.pass = true;
  for (const ReferenceQuery& q : queries) {
    const BenchmarkRow* row = benchmark.Find(q.object, q.condition);
    if (row == nullptr) {
      throw std::invalid_argument("no benchmark row for \"" + q.object + "\" under condition \"" +
                                  q.condition + "\"");
    }
    verdict.classes.push_back(CompareToRow(q.system_median_m, *row));
    verdict.pass = verdict.pass && verdict.classes.back().outcome == ReferenceOutcome::kPass;
  }
  return verdict;
}

ReferenceVerdict ReferenceCompare(const std::map<std::string, double>& system_medians,
                                  const HumanBenchmark& benchmark, const std::string& condition) {
  std::vector<ReferenceQuery> queries;
  for (const auto& [object, median] : system_medians) queries.push_back({object, condition, median});
  return ReferenceCompare(queries, benchmark);
}

}  // namespace odmetric
