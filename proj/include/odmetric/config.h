#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "odmetric/domain.h"
#include "odmetric/risk.h"
#include "odmetric/simgen.h"

namespace odmetric {

inline constexpr double kDefaultBrakingMaxFpPerH = 1e-4;
inline constexpr double kDefaultHornMaxFpPerH = 1e-2;

struct ReferenceClass {
  std::string object;
  std::string condition;
};

// Run configuration. JSON document; every dimensional value is a string
// with an explicit unit, e.g. "130 km/h", "350 m", "1e-4 /h", "10 s".
struct RunConfig {
  double x_percent = 50.0;
  int persistence = 1;
  double merge_window_s = 0.0;
  unsigned threads = 1;

  OddConfig odd;
  bool odd_has_escape_time = false;

  // Distance minima default to the braking distance of the ODD kinematics
  // and to the horn audibility range.
  MinimaTuple minima;

  std::vector<ReferenceClass> reference;

  // Output file names, relative to the output directory.
  std::string curve_csv = "curve.csv";
  std::string curve_svg = "curve.svg";
  std::string eval_report = "report.json";
  std::string compare_report = "compare.json";
  std::string risk_report = "risk.json";
  std::string simulated_log = "simulated.jsonl";
};

RunConfig DefaultRunConfig();
RunConfig ParseRunConfig(std::string_view text, std::vector<std::string>* warnings = nullptr);
RunConfig LoadRunConfig(const std::string& path, std::vector<std::string>* warnings = nullptr);

struct SimSetup {
  DetectorModel model;
  SimConfig sim;
  std::string output = "simulated.jsonl";
};

SimSetup ParseSimSetup(std::string_view text);
SimSetup LoadSimSetup(const std::string& path);

std::string ReadTextFile(const std::string& path);

}  // namespace odmetric
