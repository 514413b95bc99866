#include "odmetric/risk.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "odmetric/error.h"
#include "odmetric/metric.h"

namespace odmetric {
namespace {

// Neumaier summation; terms are added in a fixed order by the callers.
class CompensatedSum {
 public:
  void Add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

double MarginDecades(double goal, double rate) {
  if (rate <= 0.0) return std::numeric_limits<double>::infinity();
  return std::log10(goal / rate);
}

}  // namespace

const char* ToString(Scenario scenario) {
  switch (scenario) {
    case Scenario::kPerson: return "person";
    case Scenario::kCar: return "car";
    case Scenario::kOther: return "other";
  }
  return "?";
}

std::optional<Scenario> ScenarioFromString(std::string_view name) {
  if (name == "person") return Scenario::kPerson;
  if (name == "car") return Scenario::kCar;
  if (name == "other") return Scenario::kOther;
  return std::nullopt;
}

Scenario ScenarioOf(const ObstacleClass& obstacle_class) {
  switch (obstacle_class.kind()) {
    case ObstacleClass::Kind::kPerson:
    case ObstacleClass::Kind::kPersonSafetyJacket:
      return Scenario::kPerson;
    case ObstacleClass::Kind::kPassengerCar:
      return Scenario::kCar;
    default:
      return Scenario::kOther;
  }
}

std::map<Scenario, double> DefaultScenarioWeights() {
  return {{Scenario::kPerson, 0.70}, {Scenario::kCar, 0.24}, {Scenario::kOther, 0.06}};
}

KinematicParams OddConfig::kinematics() const {
  return {line_speed_ms, deceleration_ms2, horn_audible_m, fatal_speed_car_ms, derail_speed_ms};
}

std::string CheckOddConfig(const OddConfig& odd) {
  if (!(odd.line_speed_ms > 0.0) || !std::isfinite(odd.line_speed_ms)) return "line speed must be > 0";
  if (!(odd.deceleration_ms2 > 0.0) || !std::isfinite(odd.deceleration_ms2)) {
    return "deceleration must be > 0";
  }
  if (!(odd.horn_audible_m >= 0.0) || !std::isfinite(odd.horn_audible_m)) {
    return "horn range must be >= 0";
  }
  if (!(odd.escape_time_s > 0.0) || !std::isfinite(odd.escape_time_s)) {
    return "escape time must be > 0";
  }
  if (!(odd.max_sensor_penetration_m > 0.0)) return "max sensor penetration must be > 0";
  double weight_sum = 0.0;
  for (const auto& [scenario, weight] : odd.scenario_weights) {
    if (!(weight >= 0.0 && weight <= 1.0)) return "scenario weights must be in [0,1]";
    weight_sum += weight;
  }
  if (std::abs(weight_sum - 1.0) > 1e-9) return "scenario weights must sum to 1";
  for (const auto& [scenario, rate] : odd.scenario_rates_per_h) {
    if (!std::isfinite(rate) || rate < 0.0) return "scenario rates must be finite and >= 0";
  }
  return {};
}

ScenarioOutcome EvaluateScenario(double detection_distance_m, Scenario scenario,
                                 const OddConfig& odd) {
  if (!(detection_distance_m >= 0.0)) throw std::invalid_argument("detection distance must be >= 0");
  const KinematicParams p = odd.kinematics();
  ScenarioOutcome out;
  out.scenario = scenario;
  const double impact = CollisionSpeed(p, detection_distance_m);
  out.expected_impact_speed_ms = impact;
  if (!odd.hazard_table.empty()) out.hazard_clearance_m = HazardClearance(odd.hazard_table, impact);
  if (impact <= 0.0) return out;

  switch (scenario) {
    case Scenario::kPerson:
      out.p_fatal_single = 1.0;
      break;
    case Scenario::kCar: {
      const bool escaped = HornReactionTime(p, detection_distance_m) >= odd.escape_time_s;
      out.p_fatal_single = impact > odd.fatal_speed_car_ms && !escaped ? 1.0 : 0.0;
      break;
    }
    case Scenario::kOther:
      break;
  }
  if (odd.multi_fatality_on_derail && impact >= odd.derail_speed_ms) out.p_fatal_multi = 1.0;
  return out;
}

ScenarioDistances CollectScenarioDistances(const LogBundle& bundle, double threshold,
                                           int persistence) {
  ScenarioDistances out;
  for (const ApproachTrace& trace : bundle.approaches) {
    out[ScenarioOf(trace.obstacle_class)].push_back(
        DetectionDistance(trace, threshold, persistence));
  }
  return out;
}

FatalityRates HourlyFatalityRates(const ScenarioDistances& distances, const OddConfig& odd) {
  for (const auto& [scenario, weight] : odd.scenario_weights) {
    if (weight > 0.0 && !odd.scenario_rates_per_h.contains(scenario)) {
      throw ConfigError(std::string("missing scenario data: no appearance rate for ") +
                        ToString(scenario));
    }
  }
  CompensatedSum single;
  CompensatedSum multi;
  for (const auto& [scenario, rate] : odd.scenario_rates_per_h) {
    if (rate == 0.0) continue;
    const auto it = distances.find(scenario);
    if (it == distances.end() || it->second.empty()) {
      throw ConfigError(std::string("missing scenario data: no detections for ") +
                        ToString(scenario));
    }
    CompensatedSum p_single;
    CompensatedSum p_multi;
    for (double d : it->second) {
      const ScenarioOutcome o =
          EvaluateScenario(std::min(d, odd.max_sensor_penetration_m), scenario, odd);
      p_single.Add(o.p_fatal_single);
      p_multi.Add(o.p_fatal_multi);
    }
    const double n = static_cast<double>(it->second.size());
    single.Add(rate * (p_single.value() / n));
    multi.Add(rate * (p_multi.value() / n));
  }
  return {single.value(), multi.value()};
}

DesignGoalVerdict DesignGoalCheck(const FatalityRates& rates) {
  DesignGoalVerdict v;
  v.single_pass = rates.single_per_h < kSingleFatalityGoalPerH;
  v.multi_pass = rates.multi_per_h < kMultiFatalityGoalPerH;
  v.single_margin_decades = MarginDecades(kSingleFatalityGoalPerH, rates.single_per_h);
  v.multi_margin_decades = MarginDecades(kMultiFatalityGoalPerH, rates.multi_per_h);
  return v;
}

}  // namespace odmetric
