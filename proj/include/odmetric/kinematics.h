#pragma once

#include <utility>
#include <vector>

#include "odmetric/units.h"

namespace odmetric {

// Constant-deceleration emergency braking that starts, together with the
// warning horn, at the moment the obstacle is detected.
struct KinematicParams {
  double v_ms = units::KmhToMs(130.0);            // initial speed
  double a_ms2 = 1.0;                             // braking deceleration
  double horn_audible_m = 350.0;                  // horn range at the obstacle
  double fatal_speed_car_ms = units::KmhToMs(40.0);
  double derail_speed_ms = units::KmhToMs(130.0);
};

// Speed steps of the hazard area around the train at the collision site.
// Ships empty; values come from configuration.
class HazardAreaTable {
 public:
  struct Step {
    double speed_threshold_ms;
    double clearance_m;
  };

  HazardAreaTable() = default;
  // Thresholds must be strictly increasing and clearances non-decreasing.
  explicit HazardAreaTable(std::vector<Step> steps);

  bool empty() const { return steps_.empty(); }
  const std::vector<Step>& steps() const { return steps_; }

 private:
  std::vector<Step> steps_;
};

// v^2 / (2a).
double BrakingAvoidanceDistance(const KinematicParams& p);

// Speed at the obstacle after braking over `distance_m`; 0 when the train
// stops first.
double CollisionSpeed(const KinematicParams& p, double distance_m);

// Seconds between the obstacle's occupant first hearing the horn and the
// impact, for detection at `distance_m`. Throws CollisionAvoided beyond the
// braking distance.
double HornReactionTime(const KinematicParams& p, double distance_m);

// Smallest detection distance at which the impact speed does not exceed
// fatal_speed_car_ms; 0 if the train is never that fast.
double CarFatalDetectionThreshold(const KinematicParams& p);

// Clearance of the highest step at or below `speed_ms`, 0 below the first.
// Throws std::invalid_argument for an empty table.
double HazardClearance(const HazardAreaTable& table, double speed_ms);

}  // namespace odmetric
