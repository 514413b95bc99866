#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "odmetric/domain.h"
#include "odmetric/metric.h"

namespace odmetric {

// Synthetic detector with a known score law. The mean frame score at
// distance d is the logistic 1 / (1 + exp((d - d50) / slope)), which equals
// 0.5 at d50, plus uniform noise in [-noise, +noise], clamped to [0, 1].
// Frames exist only within max_range. False-alarm candidates arrive as a
// Poisson process at 2 * fp_rate with scores uniform in [0, 1), so the rate
// of alarms scoring at least 0.5 is fp_rate.
struct DetectorModel {
  double d50_m = 300.0;
  double slope_m = 30.0;
  double max_range_m = 600.0;
  double fp_rate_per_h = 0.01;
  double noise_amplitude = 0.0;

  double MeanScore(double distance_m) const;
  // True rate of alarms scoring >= threshold.
  double AlarmRate(double threshold) const;
};

// Empty string if valid, otherwise the first violation.
std::string CheckModel(const DetectorModel& model);

struct SimConfig {
  std::uint64_t seed = 1;
  std::size_t n_approaches = 100;
  double clear_hours = 1000.0;
  std::size_t n_segments = 1;  // clear time split evenly
  double approach_speed_ms = 130.0 / 3.6;
  double frame_interval_m = 5.0;
  // Obstacle class name -> relative weight.
  std::map<std::string, double> scenario_mix = {
      {"person", 0.70}, {"passenger_car", 0.24}, {"generic_large", 0.06}};
};

std::string CheckSimConfig(const SimConfig& config);

// Random stream: std::mt19937_64 (MT19937-64, whose output sequence is fixed
// by the C++ standard). Doubles are built from the top 53 bits, so the
// stream never goes through the implementation-defined std:: distributions.
class SimRng {
 public:
  explicit SimRng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t NextU64() { return engine_(); }
  double Uniform();  // [0, 1)

 private:
  std::mt19937_64 engine_;
};

// Frames from max_range down to 0 every frame_interval; every approach ends
// in contact. Deterministic for a fixed seed.
LogBundle SimulateLog(const DetectorModel& model, const SimConfig& config);

// Closed-form curve for persistence 1 and no alarm merging. With
// frame_interval_m > 0 detection distances are snapped to that frame grid
// (required when the model is noisy); 0 gives the continuous noise-free
// inverse of the logistic.
std::vector<CurvePoint> TrueCurve(const DetectorModel& model, double x_percent,
                                  std::span<const double> thresholds,
                                  double frame_interval_m = 0.0);

}  // namespace odmetric
