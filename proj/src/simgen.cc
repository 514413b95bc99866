#include "odmetric/simgen.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace odmetric {
namespace {

std::vector<double> FrameGrid(double max_range_m, double interval_m) {
  std::vector<double> grid;
  for (std::size_t k = 0;; ++k) {
    double d = max_range_m - static_cast<double>(k) * interval_m;
    if (std::abs(d) <= 1e-9 * max_range_m) d = 0.0;
    if (d < 0.0) break;
    grid.push_back(d);
    if (d == 0.0) break;
  }
  if (grid.back() != 0.0) grid.push_back(0.0);
  return grid;
}

// Shortest text that reads back to the same double.
std::string Format(double value) {
  char buf[40];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

// P(frame score >= threshold) at a frame with the given mean score.
double DetectProbability(const DetectorModel& model, double mean, double threshold) {
  if (threshold <= 0.0) return 1.0;
  if (threshold > 1.0) return 0.0;
  const double a = model.noise_amplitude;
  if (a == 0.0) return mean >= threshold ? 1.0 : 0.0;
  const double c = std::clamp((threshold - mean + a) / (2.0 * a), 0.0, 1.0);
  return 1.0 - c;
}

}  // namespace

double DetectorModel::MeanScore(double distance_m) const {
  return 1.0 / (1.0 + std::exp((distance_m - d50_m) / slope_m));
}

double DetectorModel::AlarmRate(double threshold) const {
  return 2.0 * fp_rate_per_h * std::clamp(1.0 - threshold, 0.0, 1.0);
}

std::string CheckModel(const DetectorModel& m) {
  if (!(m.d50_m > 0.0) || !std::isfinite(m.d50_m)) return "d50 must be > 0";
  if (!(m.slope_m > 0.0) || !std::isfinite(m.slope_m)) return "slope must be > 0";
  if (!(m.max_range_m > 0.0) || !std::isfinite(m.max_range_m)) return "max range must be > 0";
  if (m.d50_m > m.max_range_m) return "d50 must not exceed max range";
  if (!(m.fp_rate_per_h >= 0.0) || !std::isfinite(m.fp_rate_per_h)) return "fp rate must be >= 0";
  if (!(m.noise_amplitude >= 0.0 && m.noise_amplitude < 0.5)) return "noise amplitude must be in [0, 0.5)";
  return {};
}

std::string CheckSimConfig(const SimConfig& c) {
  if (c.n_approaches < 1) return "n_approaches must be >= 1";
  if (!(c.clear_hours > 0.0) || !std::isfinite(c.clear_hours)) return "clear hours must be > 0";
  if (c.n_segments < 1) return "n_segments must be >= 1";
  if (!(c.approach_speed_ms > 0.0) || !std::isfinite(c.approach_speed_ms)) {
    return "approach speed must be > 0";
  }
  if (!(c.frame_interval_m > 0.0) || !std::isfinite(c.frame_interval_m)) {
    return "frame interval must be > 0";
  }
  double total = 0.0;
  for (const auto& [name, weight] : c.scenario_mix) {
    if (name.empty()) return "empty class name in scenario mix";
    if (!(weight >= 0.0) || !std::isfinite(weight)) return "scenario mix weights must be >= 0";
    total += weight;
  }
  if (!(total > 0.0)) return "scenario mix must have positive total weight";
  return {};
}

double SimRng::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

LogBundle SimulateLog(const DetectorModel& model, const SimConfig& config) {
  if (const std::string e = CheckModel(model); !e.empty()) throw std::invalid_argument(e);
  if (const std::string e = CheckSimConfig(config); !e.empty()) throw std::invalid_argument(e);

  SimRng rng(config.seed);
  LogBundle bundle;
  bundle.meta = {
      {"generator", "odmetric-simgen"},
      {"seed", std::to_string(config.seed)},
      {"d50_m", Format(model.d50_m)},
      {"slope_m", Format(model.slope_m)},
      {"max_range_m", Format(model.max_range_m)},
      {"fp_rate_per_h", Format(model.fp_rate_per_h)},
      {"noise_amplitude", Format(model.noise_amplitude)},
  };

  double mix_total = 0.0;
  for (const auto& [name, weight] : config.scenario_mix) mix_total += weight;

  const std::vector<double> grid = FrameGrid(model.max_range_m, config.frame_interval_m);
  bundle.approaches.reserve(config.n_approaches);
  for (std::size_t i = 0; i < config.n_approaches; ++i) {
    ApproachTrace trace;
    char id[32];
    std::snprintf(id, sizeof id, "approach-%05zu", i);
    trace.id = id;

    const double pick = rng.Uniform() * mix_total;
    double cumulative = 0.0;
    std::string chosen = config.scenario_mix.rbegin()->first;
    for (const auto& [name, weight] : config.scenario_mix) {
      cumulative += weight;
      if (pick < cumulative) {
        chosen = name;
        break;
      }
    }
    trace.obstacle_class = ObstacleClass::FromString(chosen);

    trace.frames.reserve(grid.size());
    for (double d : grid) {
      const double noise = model.noise_amplitude * (2.0 * rng.Uniform() - 1.0);
      const double score = std::clamp(model.MeanScore(d) + noise, 0.0, 1.0);
      trace.frames.push_back({d, (model.max_range_m - d) / config.approach_speed_ms, score});
    }
    trace.contacted = true;
    bundle.approaches.push_back(std::move(trace));
  }

  const double segment_hours = config.clear_hours / static_cast<double>(config.n_segments);
  const double rate_per_s = 2.0 * model.fp_rate_per_h / 3600.0;
  for (std::size_t j = 0; j < config.n_segments; ++j) {
    ClearSegment segment;
    char id[32];
    std::snprintf(id, sizeof id, "clear-%04zu", j);
    segment.id = id;
    segment.duration_h = segment_hours;
    if (rate_per_s > 0.0) {
      const double duration_s = segment_hours * 3600.0;
      double t = 0.0;
      while (true) {
        t += -std::log1p(-rng.Uniform()) / rate_per_s;
        if (t > duration_s) break;
        segment.alarms.push_back({t, rng.Uniform()});
      }
    }
    bundle.segments.push_back(std::move(segment));
  }
  return bundle;
}

std::vector<CurvePoint> TrueCurve(const DetectorModel& model, double x_percent,
                                  std::span<const double> thresholds, double frame_interval_m) {
  if (const std::string e = CheckModel(model); !e.empty()) throw std::invalid_argument(e);
  if (!(x_percent > 0.0 && x_percent <= 100.0)) throw std::invalid_argument("x_percent out of (0,100]");
  if (frame_interval_m <= 0.0 && model.noise_amplitude > 0.0) {
    throw std::invalid_argument("a noisy model needs the frame grid");
  }

  std::vector<double> grid;
  if (frame_interval_m > 0.0) grid = FrameGrid(model.max_range_m, frame_interval_m);

  std::vector<CurvePoint> points;
  for (double tau : thresholds) {
    CurvePoint point;
    point.threshold = tau;
    if (grid.empty()) {
      if (tau <= model.MeanScore(model.max_range_m)) {
        point.dx_m = model.max_range_m;
      } else if (tau > model.MeanScore(0.0)) {
        point.dx_m = 0.0;
      } else {
        point.dx_m = std::clamp(model.d50_m + model.slope_m * std::log(1.0 / tau - 1.0), 0.0,
                                model.max_range_m);
      }
    } else {
      // Detection distance takes the value of the first frame that fires;
      // survival is the probability that no earlier frame fired.
      double survival = 1.0;
      point.dx_m = 0.0;
      for (double d : grid) {
        survival *= 1.0 - DetectProbability(model, model.MeanScore(d), tau);
        if (1.0 - survival >= x_percent / 100.0) {
          point.dx_m = d;
          break;
        }
      }
    }
    point.fp_per_h = model.AlarmRate(tau);
    point.fp_ordinate = FpOrdinate(point.fp_per_h);
    points.push_back(point);
  }
  return points;
}

}  // namespace odmetric
