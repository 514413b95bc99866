#pragma once

#include <span>
#include <string>
#include <vector>

#include "odmetric/domain.h"

namespace odmetric {

// One threshold of the sweep: X%-detection distance against false alarms.
struct CurvePoint {
  double threshold = 0.0;
  double dx_m = 0.0;
  double fp_per_h = 0.0;
  double fp_ordinate = 0.0;  // -log10(fp_per_h); +inf for a zero rate

  bool operator==(const CurvePoint&) const = default;
};

// Points sorted by strictly decreasing threshold. Along that order both
// dx_m and fp_per_h are non-decreasing.
struct PerformanceCurve {
  double x_percent = 50.0;
  std::vector<CurvePoint> points;
  std::size_t n_approaches = 0;
  double clear_hours = 0.0;

  bool operator==(const PerformanceCurve&) const = default;
};

struct OperatingPoint {
  double threshold = 0.0;
  double dx_m = 0.0;
  double fp_per_h = 0.0;
  double fp_budget_per_h = 0.0;
};

struct SweepOptions {
  double x_percent = 50.0;
  int persistence = 1;
  double merge_window_s = 0.0;
  // Worker threads for the sweep; 0 picks the hardware concurrency. The
  // result does not depend on this value.
  unsigned threads = 1;
};

double FpOrdinate(double fp_per_h);

// Largest distance at which `persistence` consecutive frames all score at
// least `threshold`, or 0 if none. Contact and non-detection both yield 0.
double DetectionDistance(const ApproachTrace& trace, double threshold,
                         int persistence = 1);

// k-th largest distance with k = ceil(n * x_percent / 100).
double QuantileDistance(std::span<const double> distances, double x_percent);

// Alarms with score >= threshold. A qualifying alarm no later than
// merge_window_s after the last counted alarm of the same segment is merged
// into it. A zero window merges nothing.
std::size_t CountFalseAlarms(std::span<const ClearSegment> segments,
                             double threshold, double merge_window_s = 0.0);

// CountFalseAlarms divided by total clear hours. Throws NoExposureError.
double FpRate(std::span<const ClearSegment> segments, double threshold,
              double merge_window_s = 0.0);

// Threshold sweep over every distinct score (frame or alarm) in the bundle.
// Throws std::invalid_argument without approaches, NoExposureError without
// clear hours.
PerformanceCurve BuildCurve(const LogBundle& bundle, const SweepOptions& options);

// Feasible point (fp_per_h <= budget) with the largest dx_m; ties go to the
// lower rate and then to the higher threshold. Throws BudgetInfeasible.
OperatingPoint SelectOperatingPoint(const PerformanceCurve& curve,
                                    double fp_budget_per_h);

struct FunctionVerdict {
  bool pass = false;
  double distance_margin_m = 0.0;  // dx_m - required distance
  double fp_margin_per_h = 0.0;    // allowed rate - fp_per_h
};

struct MinimaVerdict {
  FunctionVerdict braking;
  FunctionVerdict horn;
  bool pass() const { return braking.pass && horn.pass; }
};

MinimaVerdict CheckMinima(const OperatingPoint& braking, const OperatingPoint& horn,
                          const MinimaTuple& minima);

enum class Preference { kA, kB, kTie, kNeither };
enum class Dominance { kADominates, kBDominates, kEqual, kCrossing, kDisjoint };

struct FunctionComparison {
  Preference winner = Preference::kNeither;
  bool a_feasible = false;
  bool b_feasible = false;
  OperatingPoint a;
  OperatingPoint b;
};

struct ComparisonReport {
  FunctionComparison braking;
  FunctionComparison horn;
  Dominance dominance = Dominance::kDisjoint;
  // "A dominates", "B dominates", "A preferred", "B preferred", "mixed" or
  // "no preference".
  std::string summary;
};

// Step interpolation: the best dx_m reachable with fp_per_h <= rate, or a
// negative value when no point is that good.
double BestDistanceAtRate(const PerformanceCurve& curve, double rate_per_h);

// Throws std::invalid_argument on an x_percent mismatch.
ComparisonReport CompareSystems(const PerformanceCurve& a, const PerformanceCurve& b,
                                const MinimaTuple& minima);

const char* ToString(Preference preference);
const char* ToString(Dominance dominance);

// "threshold,dX_m,fp_per_h,fp_ordinate" followed by one row per point, 9
// significant digits, "inf" for an infinite ordinate.
std::string CurveToCsv(const PerformanceCurve& curve);

}  // namespace odmetric
