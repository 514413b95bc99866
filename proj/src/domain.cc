#include "odmetric/domain.h"

#include <array>
#include <cmath>
#include <utility>

namespace odmetric {
namespace {

constexpr std::array<std::pair<ObstacleClass::Kind, std::string_view>, 7> kClassNames = {{
    {ObstacleClass::Kind::kPerson, "person"},
    {ObstacleClass::Kind::kPersonSafetyJacket, "person_safety_jacket"},
    {ObstacleClass::Kind::kPassengerCar, "passenger_car"},
    {ObstacleClass::Kind::kTree, "tree"},
    {ObstacleClass::Kind::kRock, "rock"},
    {ObstacleClass::Kind::kGenericSmall, "generic_small"},
    {ObstacleClass::Kind::kGenericLarge, "generic_large"},
}};

bool IsScore(double s) { return std::isfinite(s) && s >= 0.0 && s <= 1.0; }

}  // namespace

ObstacleClass ObstacleClass::Other(std::string label) {
  return FromString(label);
}

ObstacleClass ObstacleClass::FromString(std::string_view name) {
  for (const auto& [kind, text] : kClassNames) {
    if (text == name) return ObstacleClass(kind);
  }
  ObstacleClass c(Kind::kOther);
  c.label_ = std::string(name);
  return c;
}

std::string ObstacleClass::ToString() const {
  for (const auto& [kind, text] : kClassNames) {
    if (kind == kind_) return std::string(text);
  }
  return label_;
}

double LogBundle::total_clear_hours() const {
  double hours = 0.0;
  for (const ClearSegment& s : segments) hours += s.duration_h;
  return hours;
}

std::string CheckFrames(const std::vector<Frame>& frames) {
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const Frame& f = frames[i];
    if (!std::isfinite(f.distance_m) || f.distance_m < 0.0) return "negative or non-finite distance";
    if (!std::isfinite(f.time_s) || f.time_s < 0.0) return "negative or non-finite time";
    if (!IsScore(f.score)) return "score out of [0,1]";
    if (i > 0) {
      if (!(f.distance_m < frames[i - 1].distance_m)) return "non-monotone distance";
      if (!(f.time_s > frames[i - 1].time_s)) return "non-monotone time";
    }
  }
  return {};
}

std::string CheckTrace(const ApproachTrace& trace) {
  if (trace.frames.empty() && !trace.contacted) return "approach without frames must be contacted";
  if (trace.obstacle_class.kind() == ObstacleClass::Kind::kOther &&
      trace.obstacle_class.label().empty()) {
    return "empty obstacle class";
  }
  return CheckFrames(trace.frames);
}

std::string CheckSegment(const ClearSegment& segment) {
  if (!std::isfinite(segment.duration_h) || !(segment.duration_h > 0.0)) {
    return "segment hours must be > 0";
  }
  const double duration_s = segment.duration_h * 3600.0;
  for (std::size_t i = 0; i < segment.alarms.size(); ++i) {
    const AlarmEvent& a = segment.alarms[i];
    if (!std::isfinite(a.time_s) || a.time_s < 0.0) return "negative or non-finite alarm time";
    if (a.time_s > duration_s) return "alarm time beyond segment duration";
    if (!IsScore(a.score)) return "score out of [0,1]";
    if (i > 0 && a.time_s < segment.alarms[i - 1].time_s) return "alarm times not sorted";
  }
  return {};
}

std::string CheckMinima(const MinimaTuple& m) {
  for (double v : {m.braking_min_distance_m, m.braking_max_fp_per_h, m.horn_min_distance_m,
                   m.horn_max_fp_per_h}) {
    if (!std::isfinite(v) || v < 0.0) return "minima must be finite and non-negative";
  }
  return {};
}

}  // namespace odmetric
