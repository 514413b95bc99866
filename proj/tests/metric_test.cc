#include <cmath>
#include <limits>
#include <random>

#include "gtest/gtest.h"
#include "odmetric/error.h"
#include "odmetric/metric.h"
#include "oracle.h"

namespace odmetric {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ApproachTrace Trace(std::vector<std::pair<double, double>> distance_score, bool contacted = false) {
  ApproachTrace t;
  t.id = "t";
  double time = 0.0;
  for (auto [d, s] : distance_score) t.frames.push_back({d, time += 1.0, s});
  t.contacted = contacted;
  return t;
}

ClearSegment Segment(double hours, std::vector<std::pair<double, double>> time_score) {
  ClearSegment s;
  s.id = "c";
  s.duration_h = hours;
  for (auto [t, sc] : time_score) s.alarms.push_back({t, sc});
  return s;
}

TEST(DetectionDistance, FirstFrameMeetingThreshold) {
  const ApproachTrace t = Trace({{400, 0.3}, {200, 0.8}, {100, 0.9}});
  EXPECT_EQ(DetectionDistance(t, 0.5, 1), 200.0);
  EXPECT_EQ(DetectionDistance(t, 0.95, 1), 0.0);
}

TEST(DetectionDistance, Persistence) {
  const ApproachTrace t = Trace({{400, 0.8}, {300, 0.2}, {200, 0.8}, {100, 0.8}});
  EXPECT_EQ(DetectionDistance(t, 0.5, 2), 200.0);
  EXPECT_EQ(oracle::Detection(t, 0.5, 2), 200.0);
  EXPECT_EQ(DetectionDistance(t, 0.5, 3), 0.0);
  EXPECT_THROW(DetectionDistance(t, 0.5, 0), std::invalid_argument);
}

TEST(DetectionDistance, ContactOnlyIsNonDetection) {
  ApproachTrace t;
  t.contacted = true;
  EXPECT_EQ(DetectionDistance(t, 0.0, 1), 0.0);
}

TEST(QuantileDistance, OrderStatistic) {
  const std::vector<double> d = {400, 300, 200, 100, 0};
  EXPECT_EQ(QuantileDistance(d, 50), 200.0);
  EXPECT_EQ(oracle::Quantile(d, 50), 200.0);
  EXPECT_EQ(QuantileDistance(d, 100), 0.0);
  EXPECT_EQ(QuantileDistance(d, 20), 400.0);
  EXPECT_EQ(QuantileDistance(d, 20.0001), 300.0);
  const std::vector<double> single = {123.0};
  for (double x : {0.1, 50.0, 99.0, 100.0}) EXPECT_EQ(QuantileDistance(single, x), 123.0);
  EXPECT_THROW(QuantileDistance(std::vector<double>{}, 50), std::invalid_argument);
  EXPECT_THROW(QuantileDistance(d, 0.0), std::invalid_argument);
  EXPECT_THROW(QuantileDistance(d, 100.1), std::invalid_argument);
}

TEST(FpRate, Arithmetic) {
  const std::vector<ClearSegment> segs = {Segment(300, {{5, 0.7}, {8, 0.8}, {100, 0.9}})};
  EXPECT_DOUBLE_EQ(FpRate(segs, 0.5, 0.0), 0.01);
  EXPECT_DOUBLE_EQ(FpOrdinate(FpRate(segs, 0.5, 0.0)), 2.0);
}

TEST(FpRate, MergeWindow) {
  const std::vector<ClearSegment> segs = {Segment(1, {{5, 0.7}, {8, 0.8}, {100, 0.9}})};
  EXPECT_EQ(CountFalseAlarms(segs, 0.5, 10.0), 2u);
  EXPECT_EQ(oracle::FalseAlarms(segs, 0.5, 10.0), 2u);
  EXPECT_EQ(CountFalseAlarms(segs, 0.5, 0.0), 3u);
  // Merging chains from the counted alarm, not from the last merged one.
  const std::vector<ClearSegment> chain = {Segment(1, {{0, 1}, {6, 1}, {12, 1}})};
  EXPECT_EQ(CountFalseAlarms(chain, 0.5, 10.0), 2u);
}

TEST(FpRate, EmptyCountGivesInfiniteOrdinate) {
  const std::vector<ClearSegment> segs = {Segment(10, {{5, 0.7}, {8, 0.99}})};
  EXPECT_EQ(FpRate(segs, 1.0, 0.0), 0.0);
  EXPECT_EQ(FpOrdinate(0.0), kInf);
}

TEST(FpRate, NoExposure) {
  EXPECT_THROW(FpRate(std::vector<ClearSegment>{}, 0.5, 0.0), NoExposureError);
}

TEST(BuildCurve, SeparableScores) {
  LogBundle b;
  b.approaches = {Trace({{500, 0.9}, {250, 0.9}}), Trace({{400, 0.9}})};
  b.segments = {Segment(100, {{1, 0.1}, {2, 0.1}})};
  const PerformanceCurve c = BuildCurve(b, {.x_percent = 50});
  ASSERT_EQ(c.points.size(), 2u);
  EXPECT_EQ(c.points[0].threshold, 0.9);
  EXPECT_EQ(c.points[0].fp_per_h, 0.0);
  EXPECT_EQ(c.points[0].fp_ordinate, kInf);
  EXPECT_EQ(c.points[0].dx_m, 500.0);
  EXPECT_EQ(c.points[1].threshold, 0.1);
  EXPECT_DOUBLE_EQ(c.points[1].fp_per_h, 0.02);
  EXPECT_EQ(c.points[1].dx_m, 500.0);
}

TEST(BuildCurve, PermanentPositiveGivesMaximumRange) {
  LogBundle b;
  b.approaches = {Trace({{600, 0.05}, {300, 0.6}}), Trace({{600, 0.2}, {100, 0.9}})};
  b.segments = {Segment(2, {{1, 0.01}, {2, 0.3}})};
  const PerformanceCurve c = BuildCurve(b, {.x_percent = 100});
  const CurvePoint& lowest = c.points.back();
  EXPECT_EQ(lowest.threshold, 0.01);
  EXPECT_EQ(lowest.dx_m, 600.0);
  EXPECT_DOUBLE_EQ(lowest.fp_per_h, 1.0);
  EXPECT_EQ(lowest.fp_ordinate, 0.0);
}

TEST(BuildCurve, Errors) {
  LogBundle b;
  b.segments = {Segment(2, {})};
  EXPECT_THROW(BuildCurve(b, {}), std::invalid_argument);
  b.approaches = {Trace({{10, 0.5}})};
  b.segments.clear();
  EXPECT_THROW(BuildCurve(b, {}), NoExposureError);
}

TEST(BuildCurve, ThreadCountDoesNotChangeResult) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  LogBundle b;
  for (int i = 0; i < 200; ++i) {
    std::vector<std::pair<double, double>> f;
    for (int k = 0; k < 40; ++k) f.push_back({400.0 - 10.0 * k, u(rng)});
    b.approaches.push_back(Trace(f));
  }
  ClearSegment s = Segment(50, {});
  for (int k = 0; k < 300; ++k) s.alarms.push_back({10.0 * k, u(rng)});
  b.segments = {s};
  for (double w : {0.0, 25.0}) {
    const PerformanceCurve one = BuildCurve(b, {.x_percent = 70, .merge_window_s = w, .threads = 1});
    for (unsigned t : {2u, 3u, 7u}) {
      const PerformanceCurve many =
          BuildCurve(b, {.x_percent = 70, .merge_window_s = w, .threads = t});
      EXPECT_EQ(CurveToCsv(one), CurveToCsv(many));
      EXPECT_EQ(one, many);
    }
  }
}

// Random small bundles against the brute-force definitions.
TEST(BuildCurve, MatchesBruteForceOnRandomBundles) {
  std::mt19937_64 rng(11);
  const double grid[] = {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0};
  for (int iter = 0; iter < 3000; ++iter) {
    LogBundle b;
    const int n = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) {
      const int frames = static_cast<int>(rng() % 7);
      std::vector<std::pair<double, double>> f;
      for (int k = 0; k < frames; ++k) f.push_back({600.0 - 100.0 * k, grid[rng() % 7]});
      b.approaches.push_back(Trace(f, frames == 0 || rng() % 2 == 0));
    }
    ClearSegment s = Segment(1.0 + static_cast<double>(rng() % 50), {});
    double t = 0.0;
    for (int k = 0; k < static_cast<int>(rng() % 7); ++k) {
      t += static_cast<double>(rng() % 20);
      s.alarms.push_back({t, grid[rng() % 7]});
    }
    b.segments = {s, Segment(0.5, {{1.0, grid[rng() % 7]}})};
    const double x = (1 + rng() % 100) * 1.0;
    const int p = 1 + static_cast<int>(rng() % 3);
    const double w = static_cast<double>(rng() % 3) * 5.0;
    EXPECT_EQ(BuildCurve(b, {x, p, w, 1}), oracle::Curve(b, x, p, w));
  }
}

TEST(SelectOperatingPoint, Examples) {
  PerformanceCurve c;
  c.points = {{0.9, 200, 0.0, kInf}, {0.8, 500, 5e-5, 0}, {0.5, 700, 1e-3, 3}};
  const OperatingPoint p = SelectOperatingPoint(c, 1e-4);
  EXPECT_EQ(p.dx_m, 500.0);
  EXPECT_EQ(p.fp_budget_per_h, 1e-4);

  PerformanceCurve tight;
  tight.points = {{0.9, 200, 1e-3, 3}, {0.5, 700, 1e-2, 2}};
  EXPECT_THROW(SelectOperatingPoint(tight, 1e-4), BudgetInfeasible);

  PerformanceCurve tie;
  tie.points = {{0.9, 400, 1e-6, 6}, {0.8, 400, 1e-5, 5}};
  EXPECT_EQ(SelectOperatingPoint(tie, 1e-4).fp_per_h, 1e-6);
  PerformanceCurve tie2;
  tie2.points = {{0.9, 400, 1e-6, 6}, {0.8, 400, 1e-6, 6}};
  EXPECT_EQ(SelectOperatingPoint(tie2, 1e-4).threshold, 0.9);
  EXPECT_THROW(SelectOperatingPoint(PerformanceCurve{}, 1e-4), std::invalid_argument);
}

TEST(CheckMinima, Examples) {
  const MinimaTuple m{652, 1e-4, 350, 1e-2};
  const OperatingPoint braking{0.9, 652, 9e-5, 1e-4};
  const OperatingPoint horn{0.5, 300, 5e-3, 1e-2};
  const MinimaVerdict v = CheckMinima(braking, horn, m);
  EXPECT_TRUE(v.braking.pass);
  EXPECT_FALSE(v.horn.pass);
  EXPECT_EQ(v.horn.distance_margin_m, -50.0);
  EXPECT_GT(v.horn.fp_margin_per_h, 0.0);
  EXPECT_FALSE(v.pass());
  const MinimaVerdict zero = CheckMinima({0, 0, 0, 0}, {0, 0, 0, 0}, {});
  EXPECT_TRUE(zero.pass());
  EXPECT_TRUE(CheckMinima({0, 0, 0, 0}, {0, 0, 0, 0}, MinimaTuple{}).pass());
}

PerformanceCurve Curve(std::vector<std::pair<double, double>> dx_fp, double x = 50) {
  PerformanceCurve c;
  c.x_percent = x;
  double tau = 1.0;
  for (auto [dx, fp] : dx_fp) {
    c.points.push_back({tau, dx, fp, FpOrdinate(fp)});
    tau -= 0.1;
  }
  return c;
}

TEST(CompareSystems, Dominance) {
  const MinimaTuple m{652, 1e-4, 350, 1e-2};
  const PerformanceCurve a = Curve({{300, 0}, {500, 1e-5}, {700, 1e-3}, {800, 1e-1}});
  const PerformanceCurve b = Curve({{200, 0}, {400, 1e-5}, {600, 1e-3}, {700, 1e-1}});
  const ComparisonReport r = CompareSystems(a, b, m);
  EXPECT_EQ(r.dominance, Dominance::kADominates);
  EXPECT_EQ(r.summary, "A dominates");
  EXPECT_EQ(r.braking.winner, Preference::kA);
  EXPECT_EQ(r.horn.winner, Preference::kA);
  EXPECT_EQ(CompareSystems(b, a, m).summary, "B dominates");
}

TEST(CompareSystems, MixedVerdict) {
  const MinimaTuple m{652, 1e-4, 350, 1e-2};
  // A reaches farther at tight budgets, B at lax ones.
  const PerformanceCurve a = Curve({{300, 0}, {500, 1e-5}, {550, 1e-2}});
  const PerformanceCurve b = Curve({{100, 0}, {300, 1e-5}, {700, 1e-2}});
  const ComparisonReport r = CompareSystems(a, b, m);
  EXPECT_EQ(r.braking.winner, Preference::kA);
  EXPECT_EQ(r.horn.winner, Preference::kB);
  EXPECT_EQ(r.dominance, Dominance::kCrossing);
  EXPECT_EQ(r.summary, "mixed");
}

TEST(CompareSystems, IdenticalAndMismatch) {
  const MinimaTuple m{652, 1e-4, 350, 1e-2};
  const PerformanceCurve a = Curve({{300, 0}, {500, 1e-3}});
  const ComparisonReport r = CompareSystems(a, a, m);
  EXPECT_EQ(r.dominance, Dominance::kEqual);
  EXPECT_EQ(r.summary, "no preference");
  EXPECT_EQ(r.braking.winner, Preference::kTie);
  EXPECT_THROW(CompareSystems(a, Curve({{300, 0}}, 90), m), std::invalid_argument);
}

TEST(CurveToCsv, Format) {
  PerformanceCurve c = Curve({{652.00617283950601, 0}, {300, 1.0 / 3.0}});
  EXPECT_EQ(CurveToCsv(c),
            "threshold,dX_m,fp_per_h,fp_ordinate\n"
            "1,652.006173,0,inf\n"
            "0.9,300,0.333333333,0.477121255\n");
}

// ---- invariants, >= 1000 generated cases each ----

class MetricProperties : public ::testing::Test {
 protected:
  std::mt19937_64 rng{2024};
  double U() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

  ApproachTrace RandomTrace() {
    std::vector<std::pair<double, double>> f;
    const int n = static_cast<int>(rng() % 12);
    double d = 800.0 * U() + 1.0;
    for (int k = 0; k < n && d >= 0.0; ++k) {
      f.push_back({d, std::round(U() * 10.0) / 10.0});
      d -= 1.0 + 60.0 * U();
    }
    return Trace(f, f.empty());
  }

  std::vector<double> RandomDistances() {
    std::vector<double> d(1 + rng() % 15);
    for (double& v : d) v = rng() % 4 == 0 ? 0.0 : std::round(U() * 800.0);
    return d;
  }

  std::vector<ClearSegment> RandomSegments() {
    std::vector<ClearSegment> segs;
    for (int j = 0; j < 1 + static_cast<int>(rng() % 3); ++j) {
      ClearSegment s = Segment(1.0 + 10.0 * U(), {});
      double t = 0.0;
      for (int k = 0; k < static_cast<int>(rng() % 10); ++k) {
        t += std::round(30.0 * U());
        s.alarms.push_back({t, std::round(U() * 10.0) / 10.0});
      }
      segs.push_back(s);
    }
    return segs;
  }
};

TEST_F(MetricProperties, QuantileNonIncreasingInX) {
  for (int i = 0; i < 1000; ++i) {
    const auto d = RandomDistances();
    double prev = kInf;
    for (double x = 1.0; x <= 100.0; x += 1.0) {
      const double q = QuantileDistance(d, x);
      ASSERT_LE(q, prev);
      prev = q;
    }
  }
}

TEST_F(MetricProperties, AddingNonDetectionNeverIncreasesQuantile) {
  for (int i = 0; i < 1000; ++i) {
    auto d = RandomDistances();
    auto more = d;
    more.push_back(0.0);
    for (double x = 5.0; x <= 100.0; x += 5.0) {
      ASSERT_LE(QuantileDistance(more, x), QuantileDistance(d, x));
    }
  }
}

TEST_F(MetricProperties, DetectionMonotoneInThresholdAndPersistence) {
  for (int i = 0; i < 1000; ++i) {
    const ApproachTrace t = RandomTrace();
    for (int p = 1; p <= 4; ++p) {
      double prev = kInf;
      for (double tau = 0.0; tau <= 1.0001; tau += 0.05) {
        const double d = DetectionDistance(t, tau, p);
        ASSERT_LE(d, prev);
        ASSERT_LE(DetectionDistance(t, tau, p + 1), d);
        prev = d;
      }
    }
  }
}

TEST_F(MetricProperties, FpRateMonotoneInThresholdAndWindow) {
  for (int i = 0; i < 1000; ++i) {
    const auto segs = RandomSegments();
    for (double tau = 0.0; tau <= 1.0; tau += 0.1) {
      for (double w = 0.0; w <= 60.0; w += 5.0) {
        const double r = FpRate(segs, tau, w);
        ASSERT_LE(FpRate(segs, tau + 0.1, w), r);
        ASSERT_LE(FpRate(segs, tau, w + 5.0), r);
      }
    }
  }
}

TEST_F(MetricProperties, CurveMonotoneAndOperatingPointParetoMaximal) {
  for (int i = 0; i < 1000; ++i) {
    LogBundle b;
    for (int k = 0; k < 1 + static_cast<int>(rng() % 8); ++k) b.approaches.push_back(RandomTrace());
    b.segments = RandomSegments();
    const double w = static_cast<double>(rng() % 3) * 10.0;
    const PerformanceCurve c = BuildCurve(b, {1.0 + 99.0 * U(), 1 + static_cast<int>(rng() % 3), w, 1});
    for (std::size_t k = 1; k < c.points.size(); ++k) {
      ASSERT_LT(c.points[k].threshold, c.points[k - 1].threshold);
      ASSERT_GE(c.points[k].dx_m, c.points[k - 1].dx_m);
      ASSERT_GE(c.points[k].fp_per_h, c.points[k - 1].fp_per_h);
    }
    for (const CurvePoint& pt : c.points) {
      if (pt.fp_per_h > 0) {
        ASSERT_EQ(pt.fp_ordinate, -std::log10(pt.fp_per_h));
      }
    }
    if (c.points.empty()) continue;  // no scores at all
    const double budget = c.points[rng() % c.points.size()].fp_per_h;
    const OperatingPoint op = SelectOperatingPoint(c, budget);
    ASSERT_LE(op.fp_per_h, budget);
    for (const CurvePoint& pt : c.points) {
      if (pt.fp_per_h > budget) continue;
      // No feasible point is better on one axis and no worse on the other.
      ASSERT_FALSE(pt.dx_m > op.dx_m && pt.fp_per_h <= op.fp_per_h);
      ASSERT_FALSE(pt.dx_m >= op.dx_m && pt.fp_per_h < op.fp_per_h);
    }
  }
}

}  // namespace
}  // namespace odmetric
