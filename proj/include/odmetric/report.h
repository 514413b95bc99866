#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "odmetric/human_benchmark.h"
#include "odmetric/metric.h"
#include "odmetric/poisson.h"
#include "odmetric/risk.h"

namespace odmetric {

// JSON cannot hold infinities, so they are written as the string "inf".
nlohmann::json FiniteOrInf(double value);

// "1.23e-07": three significant digits.
std::string Scientific3(double value);

nlohmann::json ToJson(const OperatingPoint& point);
nlohmann::json ToJson(const MinimaTuple& minima);
nlohmann::json ToJson(const FunctionVerdict& verdict);
nlohmann::json ToJson(const ComparisonReport& report);
nlohmann::json ToJson(const DesignGoalVerdict& verdict);
nlohmann::json ToJson(const ReferenceVerdict& verdict);
nlohmann::json ToJson(const RateInterval& interval);

struct ChartSeries {
  std::string name;
  const PerformanceCurve* curve;
};

// Static SVG in the style of the submetric chart: X%-distance on the
// abscissa, -log10 of the hourly false-positive rate on the ordinate, with
// the braking and horn minima drawn as dashed lines.
std::string RenderCurveSvg(const std::vector<ChartSeries>& series,
                           const MinimaTuple& minima);

}  // namespace odmetric
