#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace odmetric {

// One detector output while approaching an obstacle.
struct Frame {
  double distance_m = 0.0;  // along track, to the obstacle
  double time_s = 0.0;      // since start of the approach
  double score = 0.0;       // normalized confidence in [0, 1]

  bool operator==(const Frame&) const = default;
};

// Obstacle class. Known classes round-trip through their canonical name;
// anything else is kept verbatim as an "other" label.
class ObstacleClass {
 public:
  enum class Kind {
    kPerson,
    kPersonSafetyJacket,
    kPassengerCar,
    kTree,
    kRock,
    kGenericSmall,
    kGenericLarge,
    kOther,
  };

  ObstacleClass() = default;
  explicit ObstacleClass(Kind kind) : kind_(kind) {}
  static ObstacleClass Other(std::string label);
  static ObstacleClass FromString(std::string_view name);

  Kind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  std::string ToString() const;

  bool operator==(const ObstacleClass&) const = default;

 private:
  Kind kind_ = Kind::kGenericLarge;
  std::string label_;
};

struct ApproachTrace {
  std::string id;
  ObstacleClass obstacle_class;
  std::vector<Frame> frames;  // strictly decreasing distance, increasing time
  bool contacted = false;     // trace ends at physical contact

  bool operator==(const ApproachTrace&) const = default;
};

struct AlarmEvent {
  double time_s = 0.0;  // within the owning segment
  double score = 0.0;

  bool operator==(const AlarmEvent&) const = default;
};

// Obstacle-free operating time and the false alarms raised during it.
struct ClearSegment {
  std::string id;
  double duration_h = 0.0;
  std::vector<AlarmEvent> alarms;  // sorted by time

  bool operator==(const ClearSegment&) const = default;
};

struct LogBundle {
  std::vector<ApproachTrace> approaches;
  std::vector<ClearSegment> segments;
  std::map<std::string, std::string> meta;

  double total_clear_hours() const;

  bool operator==(const LogBundle&) const = default;
};

// One measurement contributed for the proposed submetric.
struct SubmissionRecord {
  std::string system_name;
  double x_percent = 0.0;
  double fp_rate_per_h = 0.0;
  double min_distance_m = 0.0;

  bool operator==(const SubmissionRecord&) const = default;
};

// Performance minima for braking and warning horn.
struct MinimaTuple {
  double braking_min_distance_m = 0.0;
  double braking_max_fp_per_h = 0.0;
  double horn_min_distance_m = 0.0;
  double horn_max_fp_per_h = 0.0;
};

// Invariant checks shared by the parsers and by programmatic construction.
// Each returns an empty string when the value is valid, otherwise a short
// description of the first violation.
std::string CheckFrames(const std::vector<Frame>& frames);
std::string CheckTrace(const ApproachTrace& trace);
std::string CheckSegment(const ClearSegment& segment);
std::string CheckMinima(const MinimaTuple& minima);

}  // namespace odmetric
