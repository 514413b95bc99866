#include "odmetric/kinematics.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "odmetric/error.h"

namespace odmetric {
namespace {

void CheckParams(const KinematicParams& p) {
  if (!(p.v_ms >= 0.0) || !std::isfinite(p.v_ms)) throw std::invalid_argument("speed must be >= 0");
  if (!(p.a_ms2 > 0.0) || !std::isfinite(p.a_ms2)) {
    throw std::invalid_argument("deceleration must be > 0");
  }
}

}  // namespace

HazardAreaTable::HazardAreaTable(std::vector<Step> steps) : steps_(std::move(steps)) {
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    const Step& s = steps_[i];
    if (!std::isfinite(s.speed_threshold_ms) || s.speed_threshold_ms < 0.0 ||
        !std::isfinite(s.clearance_m) || s.clearance_m < 0.0) {
      throw std::invalid_argument("hazard table entries must be finite and non-negative");
    }
    if (i > 0 && !(s.speed_threshold_ms > steps_[i - 1].speed_threshold_ms)) {
      throw std::invalid_argument("hazard table speed thresholds must be strictly increasing");
    }
    if (i > 0 && s.clearance_m < steps_[i - 1].clearance_m) {
      throw std::invalid_argument("hazard table clearances must be non-decreasing");
    }
  }
}

double BrakingAvoidanceDistance(const KinematicParams& p) {
  CheckParams(p);
  return p.v_ms * p.v_ms / (2.0 * p.a_ms2);
}

double CollisionSpeed(const KinematicParams& p, double distance_m) {
  CheckParams(p);
  if (!(distance_m >= 0.0)) throw std::invalid_argument("distance must be >= 0");
  return std::sqrt(std::max(0.0, p.v_ms * p.v_ms - 2.0 * p.a_ms2 * distance_m));
}

double HornReactionTime(const KinematicParams& p, double distance_m) {
  if (distance_m > BrakingAvoidanceDistance(p)) throw CollisionAvoided();
  const double impact = CollisionSpeed(p, distance_m);
  // Speed when the train is horn_audible_m away from the obstacle.
  const double heard = distance_m < p.horn_audible_m
                           ? p.v_ms
                           : std::sqrt(std::max(0.0, p.v_ms * p.v_ms -
                                                         2.0 * p.a_ms2 * (distance_m - p.horn_audible_m)));
  return (heard - impact) / p.a_ms2;
}

double CarFatalDetectionThreshold(const KinematicParams& p) {
  CheckParams(p);
  const double u = p.fatal_speed_car_ms;
  if (!(p.v_ms > u)) return 0.0;
  return (p.v_ms * p.v_ms - u * u) / (2.0 * p.a_ms2);
}

double HazardClearance(const HazardAreaTable& table, double speed_ms) {
  if (table.empty()) throw std::invalid_argument("empty hazard table");
  double clearance = 0.0;
  for (const HazardAreaTable::Step& step : table.steps()) {
    if (step.speed_threshold_ms <= speed_ms) clearance = step.clearance_m;
  }
  return clearance;
}

}  // namespace odmetric
