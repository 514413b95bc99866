#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "odmetric/domain.h"
#include "odmetric/kinematics.h"

namespace odmetric {

enum class Scenario { kPerson, kCar, kOther };

const char* ToString(Scenario scenario);
std::optional<Scenario> ScenarioFromString(std::string_view name);
// person and person_safety_jacket -> person, passenger_car -> car, rest -> other.
Scenario ScenarioOf(const ObstacleClass& obstacle_class);

// Default share of fatal accident scenarios.
std::map<Scenario, double> DefaultScenarioWeights();

// ODD-Data consumed by the consequence model.
struct OddConfig {
  double line_speed_ms = units::KmhToMs(130.0);
  double deceleration_ms2 = 1.0;
  double horn_audible_m = 350.0;
  double fatal_speed_car_ms = units::KmhToMs(40.0);
  double derail_speed_ms = units::KmhToMs(130.0);
  std::map<Scenario, double> scenario_rates_per_h;  // obstacle appearances
  std::map<Scenario, double> scenario_weights = DefaultScenarioWeights();
  double escape_time_s = 0.0;  // required; no default
  double max_sensor_penetration_m = std::numeric_limits<double>::infinity();
  HazardAreaTable hazard_table;
  bool multi_fatality_on_derail = true;

  KinematicParams kinematics() const;
};

// Empty string if valid, otherwise the first violation.
std::string CheckOddConfig(const OddConfig& odd);

struct ScenarioOutcome {
  Scenario scenario = Scenario::kOther;
  double p_fatal_single = 0.0;
  double p_fatal_multi = 0.0;
  double expected_impact_speed_ms = 0.0;
  double hazard_clearance_m = 0.0;  // 0 when the table is empty
};

ScenarioOutcome EvaluateScenario(double detection_distance_m, Scenario scenario,
                                 const OddConfig& odd);

// Per-approach detection distances at the chosen operating point, grouped
// by scenario.
using ScenarioDistances = std::map<Scenario, std::vector<double>>;

ScenarioDistances CollectScenarioDistances(const LogBundle& bundle, double threshold,
                                           int persistence = 1);

struct FatalityRates {
  double single_per_h = 0.0;
  double multi_per_h = 0.0;
};

// Sum over scenarios of appearance rate times the mean fatality probability
// over the empirical distances, each clipped to max_sensor_penetration_m.
// Scenarios with a positive weight need a rate; scenarios with a positive
// rate need at least one distance. Throws ConfigError otherwise.
FatalityRates HourlyFatalityRates(const ScenarioDistances& distances,
                                  const OddConfig& odd);

inline constexpr double kSingleFatalityGoalPerH = 1e-7;
inline constexpr double kMultiFatalityGoalPerH = 1e-9;

struct DesignGoalVerdict {
  bool single_pass = false;
  bool multi_pass = false;
  double single_margin_decades = 0.0;  // log10(goal / rate), +inf at zero rate
  double multi_margin_decades = 0.0;
  bool pass() const { return single_pass && multi_pass; }
};

// Strict: a rate equal to the goal fails.
DesignGoalVerdict DesignGoalCheck(const FatalityRates& rates);

}  // namespace odmetric
