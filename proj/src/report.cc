#include "odmetric/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace odmetric {

using nlohmann::json;

json FiniteOrInf(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return value;
}

std::string Scientific3(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", value);
  return buf;
}

json ToJson(const OperatingPoint& p) {
  return {{"threshold", p.threshold},
          {"dX_m", p.dx_m},
          {"fp_per_h", p.fp_per_h},
          {"fp_ordinate", FiniteOrInf(FpOrdinate(p.fp_per_h))},
          {"fp_budget_per_h", p.fp_budget_per_h}};
}

json ToJson(const MinimaTuple& m) {
  return {{"braking_min_distance_m", m.braking_min_distance_m},
          {"braking_max_fp_per_h", m.braking_max_fp_per_h},
          {"horn_min_distance_m", m.horn_min_distance_m},
          {"horn_max_fp_per_h", m.horn_max_fp_per_h}};
}

json ToJson(const FunctionVerdict& v) {
  return {{"pass", v.pass},
          {"distance_margin_m", v.distance_margin_m},
          {"fp_margin_per_h", v.fp_margin_per_h}};
}

json ToJson(const ComparisonReport& r) {
  auto function = [](const FunctionComparison& c) {
    json j = {{"winner", ToString(c.winner)}};
    j["A"] = c.a_feasible ? ToJson(c.a) : json("infeasible");
    j["B"] = c.b_feasible ? ToJson(c.b) : json("infeasible");
    return j;
  };
  return {{"braking", function(r.braking)},
          {"horn", function(r.horn)},
          {"dominance", ToString(r.dominance)},
          {"summary", r.summary}};
}

json ToJson(const DesignGoalVerdict& v) {
  return {{"pass", v.pass()},
          {"single_fatality", {{"pass", v.single_pass},
                               {"goal_per_h", Scientific3(kSingleFatalityGoalPerH)},
                               {"margin_decades", FiniteOrInf(v.single_margin_decades)}}},
          {"multi_fatality", {{"pass", v.multi_pass},
                              {"goal_per_h", Scientific3(kMultiFatalityGoalPerH)},
                              {"margin_decades", FiniteOrInf(v.multi_margin_decades)}}}};
}

json ToJson(const ReferenceVerdict& v) {
  json classes = json::array();
  for (const ClassVerdict& c : v.classes) {
    const char* bound = c.bound == BenchmarkRow::Bound::kExact   ? "exact"
                        : c.bound == BenchmarkRow::Bound::kBelow ? "below"
                                                                 : "above";
    classes.push_back({{"object", c.object},
                       {"condition", c.condition},
                       {"system_median_m", c.system_median_m},
                       {"human_median_m", c.required_m},
                       {"human_bound", bound},
                       {"outcome", ToString(c.outcome)}});
  }
  return {{"pass", v.pass}, {"classes", classes}};
}

json ToJson(const RateInterval& i) {
  return {{"lower_per_h", i.lower_per_h}, {"upper_per_h", i.upper_per_h}};
}

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 20.0;
constexpr double kTop = 20.0;
constexpr double kBottom = 50.0;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

std::string Fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string RenderCurveSvg(const std::vector<ChartSeries>& series, const MinimaTuple& minima) {
  double max_distance = std::max({1.0, minima.braking_min_distance_m, minima.horn_min_distance_m});
  double max_ordinate = 0.0;
  double min_ordinate = 0.0;
  for (double fp : {minima.braking_max_fp_per_h, minima.horn_max_fp_per_h}) {
    if (fp > 0.0) {
      max_ordinate = std::max(max_ordinate, FpOrdinate(fp));
      min_ordinate = std::min(min_ordinate, FpOrdinate(fp));
    }
  }
  for (const ChartSeries& s : series) {
    for (const CurvePoint& p : s.curve->points) {
      max_distance = std::max(max_distance, p.dx_m);
      if (std::isfinite(p.fp_ordinate)) {
        max_ordinate = std::max(max_ordinate, p.fp_ordinate);
        min_ordinate = std::min(min_ordinate, p.fp_ordinate);
      }
    }
  }
  max_distance *= 1.05;
  max_ordinate = std::ceil(max_ordinate) + 1.0;  // top row holds infinite ordinates
  min_ordinate = std::floor(min_ordinate);

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto sx = [&](double d) { return kLeft + d / max_distance * plot_w; };
  auto sy = [&](double o) {
    if (!std::isfinite(o)) o = max_ordinate;
    return kTop + (max_ordinate - o) / (max_ordinate - min_ordinate) * plot_h;
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + Fixed(kWidth) + "\" height=\"" +
         Fixed(kHeight) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + Fixed(kWidth) + "\" height=\"" + Fixed(kHeight) +
         "\" fill=\"white\"/>\n";
  svg += "<rect x=\"" + Fixed(kLeft) + "\" y=\"" + Fixed(kTop) + "\" width=\"" + Fixed(plot_w) +
         "\" height=\"" + Fixed(plot_h) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double o = min_ordinate; o <= max_ordinate; o += 1.0) {
    char label[16];
    std::snprintf(label, sizeof label, "%.0f", o);
    if (o == max_ordinate) std::snprintf(label, sizeof label, "inf");
    svg += "<text x=\"" + Fixed(kLeft - 6) + "\" y=\"" + Fixed(sy(o) + 4) +
           "\" text-anchor=\"end\">" + std::string(label) + "</text>\n";
  }
  svg += "<text x=\"" + Fixed(kLeft + plot_w / 2) + "\" y=\"" + Fixed(kHeight - 12) +
         "\" text-anchor=\"middle\">distance of X% detections [m]</text>\n";
  svg += "<text x=\"14\" y=\"" + Fixed(kTop + plot_h / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
         Fixed(kTop + plot_h / 2) + ")\">-log10(false positives per hour)</text>\n";
  svg += "<text x=\"" + Fixed(kLeft) + "\" y=\"" + Fixed(kTop + plot_h + 16) + "\">0</text>\n";
  svg += "<text x=\"" + Fixed(kLeft + plot_w) + "\" y=\"" + Fixed(kTop + plot_h + 16) +
         "\" text-anchor=\"end\">" + Fixed(max_distance) + "</text>\n";

  auto minima_lines = [&](double distance, double fp, const char* name, const char* color) {
    svg += "<line x1=\"" + Fixed(sx(distance)) + "\" y1=\"" + Fixed(kTop) + "\" x2=\"" +
           Fixed(sx(distance)) + "\" y2=\"" + Fixed(kTop + plot_h) + "\" stroke=\"" + color +
           "\" stroke-dasharray=\"6 4\"/>\n";
    if (fp > 0.0) {
      svg += "<line x1=\"" + Fixed(kLeft) + "\" y1=\"" + Fixed(sy(FpOrdinate(fp))) + "\" x2=\"" +
             Fixed(kLeft + plot_w) + "\" y2=\"" + Fixed(sy(FpOrdinate(fp))) + "\" stroke=\"" +
             color + "\" stroke-dasharray=\"6 4\"/>\n";
    }
    svg += "<text x=\"" + Fixed(sx(distance) + 3) + "\" y=\"" + Fixed(kTop + 12) + "\" fill=\"" +
           color + "\">" + name + "</text>\n";
  };
  minima_lines(minima.braking_min_distance_m, minima.braking_max_fp_per_h, "braking", "#555555");
  minima_lines(minima.horn_min_distance_m, minima.horn_max_fp_per_h, "horn", "#999999");

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kColors[i % 4];
    std::string path;
    std::string last;
    for (const CurvePoint& p : series[i].curve->points) {
      std::string xy = Fixed(sx(p.dx_m)) + "," + Fixed(sy(p.fp_ordinate));
      if (xy == last) continue;
      path += (path.empty() ? "" : " ") + xy;
      last = std::move(xy);
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" +
           path + "\"/>\n";
    svg += "<text x=\"" + Fixed(kLeft + plot_w - 6) + "\" y=\"" + Fixed(kTop + 28 + 14 * i) +
           "\" text-anchor=\"end\" fill=\"" + color + "\">" + series[i].name + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace odmetric
