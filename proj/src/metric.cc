#include "odmetric/metric.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

#include "odmetric/error.h"

namespace odmetric {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void CheckXPercent(double x_percent) {
  if (!(x_percent > 0.0 && x_percent <= 100.0)) {
    throw std::invalid_argument("x_percent out of (0,100]");
  }
}

// k = ceil(n * x / 100), ignoring rounding noise just above an integer.
std::size_t QuantileRank(std::size_t n, double x_percent) {
  const double r = static_cast<double>(n) * x_percent / 100.0;
  double k = std::ceil(r);
  if (k - 1.0 >= 1.0 && r - (k - 1.0) <= 1e-12 * r) k -= 1.0;
  return std::clamp<std::size_t>(static_cast<std::size_t>(k), 1, n);
}

// Counts per compressed distance index with a k-th largest query.
class DistanceCounter {
 public:
  explicit DistanceCounter(std::size_t size) : tree_(size + 1, 0) {
    while ((std::size_t{1} << log_) <= size) ++log_;
  }

  void Add(std::size_t index, int delta) {
    for (std::size_t i = index + 1; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
  }

  // Smallest index whose prefix count reaches `rank` (1-based).
  std::size_t FindByRank(long rank) const {
    std::size_t pos = 0;
    for (int bit = log_; bit >= 0; --bit) {
      const std::size_t next = pos + (std::size_t{1} << bit);
      if (next < tree_.size() && tree_[next] < rank) {
        pos = next;
        rank -= tree_[next];
      }
    }
    return pos;
  }

 private:
  std::vector<long> tree_;
  int log_ = 0;
};

// The trace's detection distance becomes `distance_index` once the
// threshold drops to `score` or below.
struct SweepEvent {
  double score;
  std::size_t trace;
  std::size_t distance_index;
};

template <typename Fn>
void ParallelChunks(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    fn(std::size_t{0}, count);
    return;
  }
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t lo = count * t / threads;
    const std::size_t hi = count * (t + 1) / threads;
    workers.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
}

}  // namespace

double FpOrdinate(double fp_per_h) { return fp_per_h > 0.0 ? 0.0 - std::log10(fp_per_h) : kInf; }

double DetectionDistance(const ApproachTrace& trace, double threshold, int persistence) {
  if (persistence < 1) throw std::invalid_argument("persistence must be >= 1");
  int run = 0;
  for (std::size_t i = 0; i < trace.frames.size(); ++i) {
    run = trace.frames[i].score >= threshold ? run + 1 : 0;
    if (run == persistence) return trace.frames[i + 1 - persistence].distance_m;
  }
  return 0.0;
}

double QuantileDistance(std::span<const double> distances, double x_percent) {
  if (distances.empty()) throw std::invalid_argument("empty distance list");
  CheckXPercent(x_percent);
  std::vector<double> sorted(distances.begin(), distances.end());
  const std::size_t k = QuantileRank(sorted.size(), x_percent);
  std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end(), std::greater<>());
  return sorted[k - 1];
}

std::size_t CountFalseAlarms(std::span<const ClearSegment> segments, double threshold,
                             double merge_window_s) {
  if (merge_window_s < 0.0) throw std::invalid_argument("merge window must be >= 0");
  std::size_t count = 0;
  for (const ClearSegment& segment : segments) {
    bool have_last = false;
    double last_counted_s = 0.0;
    for (const AlarmEvent& alarm : segment.alarms) {
      if (alarm.score < threshold) continue;
      if (have_last && merge_window_s > 0.0 && alarm.time_s - last_counted_s <= merge_window_s) {
        continue;
      }
      ++count;
      have_last = true;
      last_counted_s = alarm.time_s;
    }
  }
  return count;
}

double FpRate(std::span<const ClearSegment> segments, double threshold, double merge_window_s) {
  double hours = 0.0;
  for (const ClearSegment& s : segments) hours += s.duration_h;
  if (!(hours > 0.0)) throw NoExposureError();
  return static_cast<double>(CountFalseAlarms(segments, threshold, merge_window_s)) / hours;
}

PerformanceCurve BuildCurve(const LogBundle& bundle, const SweepOptions& options) {
  CheckXPercent(options.x_percent);
  if (options.persistence < 1) throw std::invalid_argument("persistence must be >= 1");
  if (!(options.merge_window_s >= 0.0)) throw std::invalid_argument("merge window must be >= 0");
  if (bundle.approaches.empty()) throw std::invalid_argument("no approaches in log");
  const double hours = bundle.total_clear_hours();
  if (!(hours > 0.0)) throw NoExposureError();

  const std::size_t n = bundle.approaches.size();
  const std::size_t p = static_cast<std::size_t>(options.persistence);

  std::vector<double> thresholds;
  std::vector<double> distances{0.0};
  std::vector<double> alarm_scores;
  for (const ApproachTrace& trace : bundle.approaches) {
    for (const Frame& f : trace.frames) {
      thresholds.push_back(f.score);
      distances.push_back(f.distance_m);
    }
  }
  for (const ClearSegment& segment : bundle.segments) {
    for (const AlarmEvent& a : segment.alarms) {
      thresholds.push_back(a.score);
      alarm_scores.push_back(a.score);
    }
  }
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  std::sort(distances.begin(), distances.end());
  distances.erase(std::unique(distances.begin(), distances.end()), distances.end());
  std::sort(alarm_scores.begin(), alarm_scores.end(), std::greater<>());

  // For each start frame the weakest score of its persistence window; the
  // running maximum of that over start frames gives the thresholds at which
  // the trace's detection distance steps up.
  std::vector<SweepEvent> events;
  for (std::size_t j = 0; j < n; ++j) {
    const std::vector<Frame>& frames = bundle.approaches[j].frames;
    if (frames.size() < p) continue;
    double best = -kInf;
    for (std::size_t i = 0; i + p <= frames.size(); ++i) {
      double window_min = frames[i].score;
      for (std::size_t q = 1; q < p; ++q) window_min = std::min(window_min, frames[i + q].score);
      if (window_min > best) {
        best = window_min;
        const auto index = static_cast<std::size_t>(
            std::lower_bound(distances.begin(), distances.end(), frames[i].distance_m) -
            distances.begin());
        events.push_back({window_min, j, index});
      }
    }
  }
  std::sort(events.begin(), events.end(), [](const SweepEvent& l, const SweepEvent& r) {
    if (l.score != r.score) return l.score > r.score;
    if (l.trace != r.trace) return l.trace < r.trace;
    return l.distance_index < r.distance_index;
  });

  // False-alarm counts only change at alarm scores.
  std::vector<double> alarm_levels = alarm_scores;
  alarm_levels.erase(std::unique(alarm_levels.begin(), alarm_levels.end()), alarm_levels.end());
  std::vector<std::size_t> count_at_level(alarm_levels.size(), 0);
  if (options.merge_window_s == 0.0) {
    std::size_t seen = 0;
    for (std::size_t q = 0; q < alarm_levels.size(); ++q) {
      while (seen < alarm_scores.size() && alarm_scores[seen] >= alarm_levels[q]) ++seen;
      count_at_level[q] = seen;
    }
  } else {
    ParallelChunks(alarm_levels.size(), options.threads, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t q = lo; q < hi; ++q) {
        count_at_level[q] = CountFalseAlarms(bundle.segments, alarm_levels[q], options.merge_window_s);
      }
    });
  }

  PerformanceCurve curve;
  curve.x_percent = options.x_percent;
  curve.n_approaches = n;
  curve.clear_hours = hours;
  curve.points.resize(thresholds.size());
  const long rank_smallest = static_cast<long>(n - QuantileRank(n, options.x_percent) + 1);

  ParallelChunks(thresholds.size(), options.threads, [&](std::size_t lo, std::size_t hi) {
    if (lo >= hi) return;
    DistanceCounter counter(distances.size());
    counter.Add(0, static_cast<int>(n));
    std::vector<std::size_t> current(n, 0);
    std::size_t next_event = 0;
    std::size_t level = 0;
    for (std::size_t t = lo; t < hi; ++t) {
      const double tau = thresholds[t];
      for (; next_event < events.size() && events[next_event].score >= tau; ++next_event) {
        const SweepEvent& e = events[next_event];
        if (e.distance_index <= current[e.trace]) continue;
        counter.Add(current[e.trace], -1);
        counter.Add(e.distance_index, 1);
        current[e.trace] = e.distance_index;
      }
      // Smallest alarm level still >= tau.
      while (level < alarm_levels.size() && alarm_levels[level] >= tau) ++level;
      const std::size_t count = level == 0 ? 0 : count_at_level[level - 1];

      CurvePoint& point = curve.points[t];
      point.threshold = tau;
      point.dx_m = distances[counter.FindByRank(rank_smallest)];
      point.fp_per_h = static_cast<double>(count) / hours;
      point.fp_ordinate = FpOrdinate(point.fp_per_h);
    }
  });
  return curve;
}

OperatingPoint SelectOperatingPoint(const PerformanceCurve& curve, double fp_budget_per_h) {
  if (curve.points.empty()) throw std::invalid_argument("empty curve");
  if (!(fp_budget_per_h >= 0.0)) throw std::invalid_argument("fp budget must be >= 0");
  const CurvePoint* best = nullptr;
  for (const CurvePoint& point : curve.points) {
    if (point.fp_per_h > fp_budget_per_h) continue;
    const bool better =
        best == nullptr || point.dx_m > best->dx_m ||
        (point.dx_m == best->dx_m &&
         (point.fp_per_h < best->fp_per_h ||
          (point.fp_per_h == best->fp_per_h && point.threshold > best->threshold)));
    if (better) best = &point;
  }
  if (best == nullptr) throw BudgetInfeasible(fp_budget_per_h);
  return {best->threshold, best->dx_m, best->fp_per_h, fp_budget_per_h};
}

MinimaVerdict CheckMinima(const OperatingPoint& braking, const OperatingPoint& horn,
                          const MinimaTuple& minima) {
  auto verdict = [](const OperatingPoint& point, double min_distance_m, double max_fp_per_h) {
    FunctionVerdict v;
    v.distance_margin_m = point.dx_m - min_distance_m;
    v.fp_margin_per_h = max_fp_per_h - point.fp_per_h;
    v.pass = point.dx_m >= min_distance_m && point.fp_per_h <= max_fp_per_h;
    return v;
  };
  return {verdict(braking, minima.braking_min_distance_m, minima.braking_max_fp_per_h),
          verdict(horn, minima.horn_min_distance_m, minima.horn_max_fp_per_h)};
}

double BestDistanceAtRate(const PerformanceCurve& curve, double rate_per_h) {
  double best = -1.0;
  for (const CurvePoint& point : curve.points) {
    if (point.fp_per_h <= rate_per_h) best = std::max(best, point.dx_m);
  }
  return best;
}

const char* ToString(Preference preference) {
  switch (preference) {
    case Preference::kA: return "A";
    case Preference::kB: return "B";
    case Preference::kTie: return "tie";
    case Preference::kNeither: return "neither";
  }
  return "?";
}

const char* ToString(Dominance dominance) {
  switch (dominance) {
    case Dominance::kADominates: return "A dominates";
    case Dominance::kBDominates: return "B dominates";
    case Dominance::kEqual: return "equal";
    case Dominance::kCrossing: return "crossing";
    case Dominance::kDisjoint: return "disjoint";
  }
  return "?";
}

ComparisonReport CompareSystems(const PerformanceCurve& a, const PerformanceCurve& b,
                                const MinimaTuple& minima) {
  if (a.x_percent != b.x_percent) throw std::invalid_argument("x_percent mismatch between curves");
  if (a.points.empty() || b.points.empty()) throw std::invalid_argument("empty curve");

  auto compare = [&](double budget) {
    FunctionComparison c;
    try {
      c.a = SelectOperatingPoint(a, budget);
      c.a_feasible = true;
    } catch (const BudgetInfeasible&) {
    }
    try {
      c.b = SelectOperatingPoint(b, budget);
      c.b_feasible = true;
    } catch (const BudgetInfeasible&) {
    }
    if (c.a_feasible && c.b_feasible) {
      c.winner = c.a.dx_m > c.b.dx_m   ? Preference::kA
                 : c.b.dx_m > c.a.dx_m ? Preference::kB
                                       : Preference::kTie;
    } else if (c.a_feasible) {
      c.winner = Preference::kA;
    } else if (c.b_feasible) {
      c.winner = Preference::kB;
    }
    return c;
  };

  ComparisonReport report;
  report.braking = compare(minima.braking_max_fp_per_h);
  report.horn = compare(minima.horn_max_fp_per_h);

  // Points are ordered by non-decreasing rate.
  const double lo = std::max(a.points.front().fp_per_h, b.points.front().fp_per_h);
  const double hi = std::min(a.points.back().fp_per_h, b.points.back().fp_per_h);
  if (lo <= hi) {
    std::vector<double> rates;
    for (const PerformanceCurve* c : {&a, &b}) {
      for (const CurvePoint& point : c->points) {
        if (point.fp_per_h >= lo && point.fp_per_h <= hi) rates.push_back(point.fp_per_h);
      }
    }
    bool a_ahead = false;
    bool b_ahead = false;
    for (double rate : rates) {
      const double da = BestDistanceAtRate(a, rate);
      const double db = BestDistanceAtRate(b, rate);
      a_ahead = a_ahead || da > db;
      b_ahead = b_ahead || db > da;
    }
    report.dominance = a_ahead && b_ahead ? Dominance::kCrossing
                       : a_ahead          ? Dominance::kADominates
                       : b_ahead          ? Dominance::kBDominates
                                          : Dominance::kEqual;
  }

  const Preference brake = report.braking.winner;
  const Preference horn = report.horn.winner;
  if (report.dominance == Dominance::kADominates) {
    report.summary = "A dominates";
  } else if (report.dominance == Dominance::kBDominates) {
    report.summary = "B dominates";
  } else if ((brake == Preference::kA && horn == Preference::kB) ||
             (brake == Preference::kB && horn == Preference::kA)) {
    report.summary = "mixed";
  } else if ((brake == Preference::kA || horn == Preference::kA) &&
             brake != Preference::kB && horn != Preference::kB) {
    report.summary = "A preferred";
  } else if ((brake == Preference::kB || horn == Preference::kB) &&
             brake != Preference::kA && horn != Preference::kA) {
    report.summary = "B preferred";
  } else {
    report.summary = "no preference";
  }
  return report;
}

std::string CurveToCsv(const PerformanceCurve& curve) {
  std::string out = "threshold,dX_m,fp_per_h,fp_ordinate\n";
  char buf[128];
  for (const CurvePoint& point : curve.points) {
    if (std::isinf(point.fp_ordinate)) {
      std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,inf\n", point.threshold, point.dx_m,
                    point.fp_per_h);
    } else {
      std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g\n", point.threshold, point.dx_m,
                    point.fp_per_h, point.fp_ordinate);
    }
    out += buf;
  }
  return out;
}

}  // namespace odmetric
