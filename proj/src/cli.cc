#include "odmetric/cli.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "odmetric/config.h"
#include "odmetric/error.h"
#include "odmetric/human_benchmark.h"
#include "odmetric/log_io.h"
#include "odmetric/metric.h"
#include "odmetric/poisson.h"
#include "odmetric/report.h"
#include "odmetric/risk.h"
#include "odmetric/simgen.h"
#include "odmetric/submission.h"

namespace odmetric {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Overrides {
  std::optional<double> x_percent;
  std::optional<double> budget_braking;
  std::optional<double> budget_horn;
  std::optional<double> merge_window_s;
  std::optional<int> persistence;
  std::optional<unsigned> threads;
  bool lenient = false;
};

void AddOverrideFlags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--x", o.x_percent, "X of the X%-detection distance, in (0,100]");
  cmd->add_option("--fp-budget-braking", o.budget_braking,
                  "false-positive budget for emergency braking [1/h]");
  cmd->add_option("--fp-budget-horn", o.budget_horn, "false-positive budget for the horn [1/h]");
  cmd->add_option("--merge-window", o.merge_window_s, "alarm merge window [s]");
  cmd->add_option("--persistence", o.persistence, "consecutive frames required for a detection");
  cmd->add_option("--threads", o.threads, "sweep threads, 0 = all cores");
  cmd->add_flag("--lenient", o.lenient, "ignore unknown log fields with a warning");
}

RunConfig ResolveConfig(const std::optional<std::string>& path, const Overrides& o,
                        std::ostream& err) {
  std::vector<std::string> warnings;
  RunConfig config = path ? LoadRunConfig(*path, &warnings) : DefaultRunConfig();
  for (const std::string& w : warnings) err << "warning: " << w << "\n";
  if (o.x_percent) {
    if (!(*o.x_percent > 0.0 && *o.x_percent <= 100.0)) throw ConfigError("--x out of (0,100]");
    config.x_percent = *o.x_percent;
  }
  if (o.budget_braking) {
    if (!(*o.budget_braking >= 0.0)) throw ConfigError("--fp-budget-braking must be >= 0");
    config.minima.braking_max_fp_per_h = *o.budget_braking;
  }
  if (o.budget_horn) {
    if (!(*o.budget_horn >= 0.0)) throw ConfigError("--fp-budget-horn must be >= 0");
    config.minima.horn_max_fp_per_h = *o.budget_horn;
  }
  if (o.merge_window_s) {
    if (!(*o.merge_window_s >= 0.0)) throw ConfigError("--merge-window must be >= 0");
    config.merge_window_s = *o.merge_window_s;
  }
  if (o.persistence) {
    if (*o.persistence < 1) throw ConfigError("--persistence must be >= 1");
    config.persistence = *o.persistence;
  }
  if (o.threads) config.threads = *o.threads;
  return config;
}

LogBundle LoadLog(const std::string& path, const Overrides& o, std::ostream& err) {
  std::vector<std::string> warnings;
  LogBundle bundle = ReadLogFile(path, ParseOptions{o.lenient}, &warnings);
  for (const std::string& w : warnings) err << "warning: " << path << ": " << w << "\n";
  return bundle;
}

SweepOptions Sweep(const RunConfig& c) {
  return {c.x_percent, c.persistence, c.merge_window_s, c.threads};
}

void WriteFile(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("write failed for " + path.string());
}

std::string Dump(const json& j) { return j.dump(2) + "\n"; }

std::optional<OperatingPoint> TrySelect(const PerformanceCurve& curve, double budget) {
  try {
    return SelectOperatingPoint(curve, budget);
  } catch (const BudgetInfeasible&) {
    return std::nullopt;
  }
}

json PointJson(const std::optional<OperatingPoint>& point, double hours) {
  if (!point) return "infeasible";
  json j = ToJson(*point);
  const auto count = static_cast<std::uint64_t>(std::llround(point->fp_per_h * hours));
  j["fp_count"] = count;
  j["fp_interval_95"] = ToJson(FpRateInterval(count, hours, 0.95));
  return j;
}

int Eval(const std::string& log_path, const std::optional<std::string>& config_path,
         const Overrides& o, const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  const RunConfig config = ResolveConfig(config_path, o, err);
  const LogBundle bundle = LoadLog(log_path, o, err);
  const PerformanceCurve curve = BuildCurve(bundle, Sweep(config));

  const auto braking = TrySelect(curve, config.minima.braking_max_fp_per_h);
  const auto horn = TrySelect(curve, config.minima.horn_max_fp_per_h);

  json report;
  report["x_percent"] = config.x_percent;
  report["persistence"] = config.persistence;
  report["merge_window_s"] = config.merge_window_s;
  report["n_approaches"] = curve.n_approaches;
  report["clear_hours"] = curve.clear_hours;
  report["n_points"] = curve.points.size();
  report["meta"] = bundle.meta;
  report["minima"] = ToJson(config.minima);
  report["braking"]["operating_point"] = PointJson(braking, curve.clear_hours);
  report["horn"]["operating_point"] = PointJson(horn, curve.clear_hours);

  bool pass = braking.has_value() && horn.has_value();
  if (pass) {
    const MinimaVerdict verdict = CheckMinima(*braking, *horn, config.minima);
    report["braking"]["verdict"] = ToJson(verdict.braking);
    report["horn"]["verdict"] = ToJson(verdict.horn);
    pass = verdict.pass();
  } else {
    report["braking"]["verdict"] = braking ? json("not evaluated") : json("budget infeasible");
    report["horn"]["verdict"] = horn ? json("not evaluated") : json("budget infeasible");
  }
  report["pass"] = pass;

  WriteFile(out_dir / config.curve_csv, CurveToCsv(curve));
  WriteFile(out_dir / config.curve_svg, RenderCurveSvg({{"system", &curve}}, config.minima));
  WriteFile(out_dir / config.eval_report, Dump(report));

  auto line = [&](const char* name, const std::optional<OperatingPoint>& p) {
    out << name << ": ";
    if (!p) {
      out << "budget infeasible\n";
      return;
    }
    out << "threshold " << p->threshold << ", dX " << p->dx_m << " m, fp "
        << Scientific3(p->fp_per_h) << " /h\n";
  };
  out << "points: " << curve.points.size() << ", approaches: " << curve.n_approaches
      << ", clear hours: " << curve.clear_hours << "\n";
  line("braking", braking);
  line("horn", horn);
  out << "minima: " << (pass ? "pass" : "fail") << "\n";
  return pass ? kExitOk : kExitGateFailed;
}

int Compare(const std::vector<std::string>& logs, const std::vector<std::string>& configs,
            const Overrides& o, const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  if (logs.size() != 2) throw ConfigError("compare needs exactly two --log files");
  if (configs.size() > 2) throw ConfigError("compare takes at most two --config files");
  auto config_at = [&](std::size_t i) -> std::optional<std::string> {
    if (configs.empty()) return std::nullopt;
    return configs[std::min(i, configs.size() - 1)];
  };
  const RunConfig config_a = ResolveConfig(config_at(0), o, err);
  const RunConfig config_b = ResolveConfig(config_at(1), o, err);
  if (config_a.x_percent != config_b.x_percent) {
    throw ConfigError("x_percent mismatch between configs");
  }
  const PerformanceCurve a = BuildCurve(LoadLog(logs[0], o, err), Sweep(config_a));
  const PerformanceCurve b = BuildCurve(LoadLog(logs[1], o, err), Sweep(config_b));
  const ComparisonReport report = CompareSystems(a, b, config_a.minima);

  json j = ToJson(report);
  j["x_percent"] = config_a.x_percent;
  j["minima"] = ToJson(config_a.minima);
  j["logs"] = {{"A", logs[0]}, {"B", logs[1]}};
  WriteFile(out_dir / config_a.compare_report, Dump(j));
  WriteFile(out_dir / config_a.curve_svg, RenderCurveSvg({{"A", &a}, {"B", &b}}, config_a.minima));

  out << "braking: " << ToString(report.braking.winner) << "\n";
  out << "horn: " << ToString(report.horn.winner) << "\n";
  out << "dominance: " << ToString(report.dominance) << "\n";
  out << report.summary << "\n";
  return kExitOk;
}

int Risk(const std::string& log_path, const std::string& config_path, const Overrides& o,
         const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  const RunConfig config = ResolveConfig(config_path, o, err);
  if (!config.odd_has_escape_time) throw ConfigError("odd.escape_time is required for risk");
  if (const std::string e = CheckOddConfig(config.odd); !e.empty()) throw ConfigError("odd: " + e);
  const LogBundle bundle = LoadLog(log_path, o, err);
  const PerformanceCurve curve = BuildCurve(bundle, Sweep(config));

  json report;
  report["x_percent"] = config.x_percent;
  const auto braking = TrySelect(curve, config.minima.braking_max_fp_per_h);
  report["operating_point"] = PointJson(braking, curve.clear_hours);
  if (!braking) {
    WriteFile(out_dir / config.risk_report, Dump(report));
    out << "braking budget infeasible; no risk estimate\n";
    return kExitGateFailed;
  }

  const ScenarioDistances distances =
      CollectScenarioDistances(bundle, braking->threshold, config.persistence);
  const FatalityRates rates = HourlyFatalityRates(distances, config.odd);
  const DesignGoalVerdict goals = DesignGoalCheck(rates);

  json scenarios = json::object();
  for (const auto& [scenario, list] : distances) {
    double single = 0.0;
    double multi = 0.0;
    double speed = 0.0;
    for (double d : list) {
      const ScenarioOutcome oc =
          EvaluateScenario(std::min(d, config.odd.max_sensor_penetration_m), scenario, config.odd);
      single += oc.p_fatal_single;
      multi += oc.p_fatal_multi;
      speed += oc.expected_impact_speed_ms;
    }
    const double n = static_cast<double>(list.size());
    const auto rate = config.odd.scenario_rates_per_h.find(scenario);
    scenarios[ToString(scenario)] = {
        {"n_approaches", list.size()},
        {"appearance_rate_per_h",
         rate == config.odd.scenario_rates_per_h.end() ? 0.0 : rate->second},
        {"p_fatal_single", single / n},
        {"p_fatal_multi", multi / n},
        {"mean_impact_speed_ms", speed / n}};
  }
  report["scenarios"] = scenarios;
  report["rates"] = {{"single_per_h", rates.single_per_h},
                     {"multi_per_h", rates.multi_per_h},
                     {"single", Scientific3(rates.single_per_h)},
                     {"multi", Scientific3(rates.multi_per_h)}};
  report["design_goals"] = ToJson(goals);

  bool pass = goals.pass();
  if (!config.reference.empty()) {
    std::vector<ReferenceQuery> queries;
    for (const ReferenceClass& ref : config.reference) {
      std::vector<double> list;
      for (const ApproachTrace& trace : bundle.approaches) {
        if (trace.obstacle_class.ToString() == ref.object) {
          list.push_back(DetectionDistance(trace, braking->threshold, config.persistence));
        }
      }
      if (list.empty()) throw ConfigError("no approaches of class \"" + ref.object + "\" in log");
      queries.push_back({ref.object, ref.condition, QuantileDistance(list, 50.0)});
    }
    const ReferenceVerdict verdict = ReferenceCompare(queries, HumanBenchmark::Published());
    report["reference"] = ToJson(verdict);
    pass = pass && verdict.pass;
    for (const ClassVerdict& c : verdict.classes) {
      out << "reference " << c.object << " (" << c.condition << "): system " << c.system_median_m
          << " m vs human " << c.required_m << " m: " << ToString(c.outcome) << "\n";
    }
  }
  report["pass"] = pass;
  WriteFile(out_dir / config.risk_report, Dump(report));

  out << "single-fatality rate: " << Scientific3(rates.single_per_h) << " /h ("
      << (goals.single_pass ? "pass" : "fail") << ")\n";
  out << "multi-fatality rate: " << Scientific3(rates.multi_per_h) << " /h ("
      << (goals.multi_pass ? "pass" : "fail") << ")\n";
  return pass ? kExitOk : kExitGateFailed;
}

int Simulate(const std::string& config_path, std::optional<std::uint64_t> seed,
             const fs::path& out_dir, std::ostream& out) {
  SimSetup setup = LoadSimSetup(config_path);
  if (seed) setup.sim.seed = *seed;
  const LogBundle bundle = SimulateLog(setup.model, setup.sim);
  const fs::path path = out_dir / setup.output;
  WriteFile(path, SerializeLog(bundle));
  std::size_t alarms = 0;
  for (const ClearSegment& s : bundle.segments) alarms += s.alarms.size();
  out << "wrote " << path.string() << ": " << bundle.approaches.size() << " approaches, "
      << alarms << " alarms over " << bundle.total_clear_hours() << " h\n";
  return kExitOk;
}

int Validate(const std::string& path, std::ostream& out) {
  const std::vector<SubmissionRecord> records = ParseSubmissions(ReadTextFile(path));
  bool all_pass = true;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const ValidationReport report = ValidateSubmission(records[i]);
    out << "record " << i + 1 << " (" << records[i].system_name << "): ";
    if (report.pass) {
      out << "pass\n";
      continue;
    }
    all_pass = false;
    out << "fail:";
    for (std::size_t v = 0; v < report.violations.size(); ++v) {
      out << (v == 0 ? " " : "; ") << report.violations[v];
    }
    out << "\n";
  }
  return all_pass ? kExitOk : kExitGateFailed;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Obstacle-detection submetric, consequence model and risk checks"};
  app.require_subcommand(1);

  std::string out_dir = ".";
  Overrides overrides;

  std::string eval_log;
  std::optional<std::string> eval_config;
  auto* eval = app.add_subcommand("eval", "build the performance curve and check the minima");
  eval->add_option("--log", eval_log, "log file")->required();
  eval->add_option("--config", eval_config, "run configuration");
  eval->add_option("--out-dir", out_dir, "output directory");
  AddOverrideFlags(eval, overrides);

  std::vector<std::string> compare_logs;
  std::vector<std::string> compare_configs;
  auto* compare = app.add_subcommand("compare", "compare two systems");
  compare->add_option("--log", compare_logs, "log of system A, then of system B")->required();
  compare->add_option("--config", compare_configs, "one shared configuration or one per system");
  compare->add_option("--out-dir", out_dir, "output directory");
  AddOverrideFlags(compare, overrides);

  std::string risk_log;
  std::string risk_config;
  auto* risk = app.add_subcommand("risk", "explicit risk assessment and reference comparison");
  risk->add_option("--log", risk_log, "log file")->required();
  risk->add_option("--config", risk_config, "run configuration with ODD data")->required();
  risk->add_option("--out-dir", out_dir, "output directory");
  AddOverrideFlags(risk, overrides);

  std::string sim_config;
  std::optional<std::uint64_t> seed;
  auto* simulate = app.add_subcommand("simulate", "write a synthetic log");
  simulate->add_option("--config", sim_config, "simulation configuration")->required();
  simulate->add_option("--seed", seed, "override the configured seed");
  simulate->add_option("--out-dir", out_dir, "output directory");

  std::string submission;
  auto* validate = app.add_subcommand("validate", "check submission records");
  validate->add_option("submission", submission, "submission file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (*eval) return Eval(eval_log, eval_config, overrides, out_dir, out, err);
    if (*compare) return Compare(compare_logs, compare_configs, overrides, out_dir, out, err);
    if (*risk) return Risk(risk_log, risk_config, overrides, out_dir, out, err);
    if (*simulate) return Simulate(sim_config, seed, out_dir, out);
    if (*validate) return Validate(submission, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace odmetric
