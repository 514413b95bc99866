#include "odmetric/config.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

#include "json.hpp"
#include "odmetric/error.h"
#include "odmetric/kinematics.h"
#include "odmetric/units.h"

namespace odmetric {
namespace {

using nlohmann::json;

json ParseDocument(std::string_view text, const char* what) {
  try {
    json doc = json::parse(text);
    if (!doc.is_object()) throw ConfigError(std::string(what) + ": top level must be an object");
    return doc;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

void RejectUnknown(const json& object, std::initializer_list<const char*> allowed,
                   const std::string& where) {
  for (const auto& [key, value] : object.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError("unknown key \"" + key + "\" in " + where);
  }
}

const json& Object(const json& parent, const char* key, const std::string& where) {
  const json& v = parent.at(key);
  if (!v.is_object()) throw ConfigError(where + "." + key + " must be an object");
  return v;
}

std::string Quantity(const json& v, const std::string& name) {
  if (v.is_number()) {
    throw ConfigError(name + ": unitless value " + v.dump() +
                      " is ambiguous; give an explicit unit such as \"130 km/h\" or \"350 m\"");
  }
  if (!v.is_string()) throw ConfigError(name + ": expected a quantity string with a unit");
  return v.get<std::string>();
}

double Number(const json& v, const std::string& name) {
  if (!v.is_number()) throw ConfigError(name + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(name + ": not finite");
  return x;
}

Scenario ScenarioKey(const std::string& key, const std::string& where) {
  const auto s = ScenarioFromString(key);
  if (!s) throw ConfigError(where + ": unknown scenario \"" + key + "\" (person, car, other)");
  return *s;
}

void ParseOdd(const json& o, RunConfig& config, std::vector<std::string>* warnings) {
  // ODD-Data items the consequence model does not use.
  static const std::set<std::string> kIgnored = {"schedule", "route_geometry", "transported_load",
                                                 "passengers", "obstacle_probabilities",
                                                 "acoustic_properties"};
  OddConfig& odd = config.odd;
  std::optional<double> total_rate;
  for (const auto& [key, v] : o.items()) {
    const std::string name = "odd." + key;
    if (key == "line_speed") {
      odd.line_speed_ms = units::ParseSpeed(Quantity(v, name), name);
    } else if (key == "deceleration") {
      odd.deceleration_ms2 = units::ParseDeceleration(Quantity(v, name), name);
    } else if (key == "horn_audible") {
      odd.horn_audible_m = units::ParseDistance(Quantity(v, name), name);
    } else if (key == "fatal_speed_car") {
      odd.fatal_speed_car_ms = units::ParseSpeed(Quantity(v, name), name);
    } else if (key == "derail_speed") {
      odd.derail_speed_ms = units::ParseSpeed(Quantity(v, name), name);
    } else if (key == "escape_time") {
      odd.escape_time_s = units::ParseDuration(Quantity(v, name), name);
      config.odd_has_escape_time = true;
    } else if (key == "max_sensor_penetration") {
      odd.max_sensor_penetration_m = units::ParseDistance(Quantity(v, name), name);
    } else if (key == "multi_fatality_on_derail") {
      if (!v.is_boolean()) throw ConfigError(name + ": expected a boolean");
      odd.multi_fatality_on_derail = v.get<bool>();
    } else if (key == "scenario_rates") {
      if (!v.is_object()) throw ConfigError(name + " must be an object");
      for (const auto& [s, rate] : v.items()) {
        odd.scenario_rates_per_h[ScenarioKey(s, name)] =
            units::ParseRatePerHour(Quantity(rate, name + "." + s), name + "." + s);
      }
    } else if (key == "obstacle_rate") {
      total_rate = units::ParseRatePerHour(Quantity(v, name), name);
    } else if (key == "scenario_weights") {
      if (!v.is_object()) throw ConfigError(name + " must be an object");
      odd.scenario_weights.clear();
      for (const auto& [s, w] : v.items()) {
        odd.scenario_weights[ScenarioKey(s, name)] = Number(w, name + "." + s);
      }
    } else if (key == "hazard_table") {
      if (!v.is_array()) throw ConfigError(name + " must be an array");
      std::vector<HazardAreaTable::Step> steps;
      for (const json& step : v) {
        if (!step.is_object()) throw ConfigError(name + " entries must be objects");
        RejectUnknown(step, {"speed", "clearance"}, name);
        if (!step.contains("speed") || !step.contains("clearance")) {
          throw ConfigError(name + " entries need speed and clearance");
        }
        steps.push_back({units::ParseSpeed(Quantity(step["speed"], name + ".speed"), name),
                         units::ParseDistance(Quantity(step["clearance"], name + ".clearance"),
                                              name)});
      }
      try {
        odd.hazard_table = HazardAreaTable(std::move(steps));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(name + ": " + e.what());
      }
    } else if (kIgnored.contains(key)) {
      if (warnings) warnings->push_back(name + " is not used by the consequence model; ignored");
    } else {
      throw ConfigError("unknown key \"" + key + "\" in odd");
    }
  }
  if (total_rate) {
    for (const auto& [scenario, weight] : odd.scenario_weights) {
      if (!odd.scenario_rates_per_h.contains(scenario)) {
        odd.scenario_rates_per_h[scenario] = *total_rate * weight;
      }
    }
  }
}

}  // namespace

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig DefaultRunConfig() {
  RunConfig config;
  config.minima.braking_min_distance_m = BrakingAvoidanceDistance(config.odd.kinematics());
  config.minima.braking_max_fp_per_h = kDefaultBrakingMaxFpPerH;
  config.minima.horn_min_distance_m = config.odd.horn_audible_m;
  config.minima.horn_max_fp_per_h = kDefaultHornMaxFpPerH;
  return config;
}

RunConfig ParseRunConfig(std::string_view text, std::vector<std::string>* warnings) {
  const json doc = ParseDocument(text, "config");
  RejectUnknown(doc, {"x_percent", "persistence", "merge_window", "threads", "odd", "minima",
                      "reference", "outputs"},
                "config");
  RunConfig config = DefaultRunConfig();
  if (doc.contains("x_percent")) {
    config.x_percent = Number(doc["x_percent"], "x_percent");
    if (!(config.x_percent > 0.0 && config.x_percent <= 100.0)) {
      throw ConfigError("x_percent out of (0,100]");
    }
  }
  if (doc.contains("persistence")) {
    const json& v = doc["persistence"];
    if (!v.is_number_integer() || v.get<long long>() < 1) {
      throw ConfigError("persistence must be an integer >= 1");
    }
    config.persistence = static_cast<int>(v.get<long long>());
  }
  if (doc.contains("merge_window")) {
    config.merge_window_s = units::ParseDuration(Quantity(doc["merge_window"], "merge_window"),
                                                 "merge_window");
    if (config.merge_window_s < 0.0) throw ConfigError("merge_window must be >= 0");
  }
  if (doc.contains("threads")) {
    const json& v = doc["threads"];
    if (!v.is_number_unsigned()) throw ConfigError("threads must be a non-negative integer");
    config.threads = v.get<unsigned>();
  }
  if (doc.contains("odd")) ParseOdd(Object(doc, "odd", "config"), config, warnings);

  // Distance minima follow the ODD kinematics unless given explicitly.
  config.minima.braking_min_distance_m = BrakingAvoidanceDistance(config.odd.kinematics());
  config.minima.horn_min_distance_m = config.odd.horn_audible_m;
  if (doc.contains("minima")) {
    const json& m = Object(doc, "minima", "config");
    RejectUnknown(m, {"braking_min_distance", "braking_max_fp", "horn_min_distance", "horn_max_fp"},
                  "minima");
    auto distance = [&](const char* key, double& field) {
      if (m.contains(key)) {
        field = units::ParseDistance(Quantity(m[key], std::string("minima.") + key),
                                     std::string("minima.") + key);
      }
    };
    auto rate = [&](const char* key, double& field) {
      if (m.contains(key)) {
        field = units::ParseRatePerHour(Quantity(m[key], std::string("minima.") + key),
                                        std::string("minima.") + key);
      }
    };
    distance("braking_min_distance", config.minima.braking_min_distance_m);
    rate("braking_max_fp", config.minima.braking_max_fp_per_h);
    distance("horn_min_distance", config.minima.horn_min_distance_m);
    rate("horn_max_fp", config.minima.horn_max_fp_per_h);
  }
  if (const std::string e = CheckMinima(config.minima); !e.empty()) throw ConfigError(e);

  if (doc.contains("reference")) {
    const json& r = doc["reference"];
    if (!r.is_array()) throw ConfigError("reference must be an array");
    for (const json& entry : r) {
      if (!entry.is_object()) throw ConfigError("reference entries must be objects");
      RejectUnknown(entry, {"object", "condition"}, "reference");
      if (!entry.contains("object") || !entry["object"].is_string() ||
          !entry.contains("condition") || !entry["condition"].is_string()) {
        throw ConfigError("reference entries need string object and condition");
      }
      config.reference.push_back(
          {entry["object"].get<std::string>(), entry["condition"].get<std::string>()});
    }
  }

  if (doc.contains("outputs")) {
    const json& o = Object(doc, "outputs", "config");
    RejectUnknown(o, {"curve_csv", "curve_svg", "eval_report", "compare_report", "risk_report",
                      "simulated_log"},
                  "outputs");
    auto name = [&](const char* key, std::string& field) {
      if (!o.contains(key)) return;
      if (!o[key].is_string() || o[key].get<std::string>().empty()) {
        throw ConfigError(std::string("outputs.") + key + " must be a non-empty string");
      }
      field = o[key].get<std::string>();
    };
    name("curve_csv", config.curve_csv);
    name("curve_svg", config.curve_svg);
    name("eval_report", config.eval_report);
    name("compare_report", config.compare_report);
    name("risk_report", config.risk_report);
    name("simulated_log", config.simulated_log);
  }
  return config;
}

RunConfig LoadRunConfig(const std::string& path, std::vector<std::string>* warnings) {
  return ParseRunConfig(ReadTextFile(path), warnings);
}

SimSetup ParseSimSetup(std::string_view text) {
  const json doc = ParseDocument(text, "simulation config");
  RejectUnknown(doc, {"model", "sim", "output"}, "simulation config");
  SimSetup setup;
  if (doc.contains("model")) {
    const json& m = Object(doc, "model", "simulation config");
    RejectUnknown(m, {"d50", "slope", "max_range", "fp_rate", "noise_amplitude"}, "model");
    if (m.contains("d50")) setup.model.d50_m = units::ParseDistance(Quantity(m["d50"], "model.d50"), "model.d50");
    if (m.contains("slope")) setup.model.slope_m = units::ParseDistance(Quantity(m["slope"], "model.slope"), "model.slope");
    if (m.contains("max_range")) {
      setup.model.max_range_m = units::ParseDistance(Quantity(m["max_range"], "model.max_range"), "model.max_range");
    }
    if (m.contains("fp_rate")) {
      setup.model.fp_rate_per_h = units::ParseRatePerHour(Quantity(m["fp_rate"], "model.fp_rate"), "model.fp_rate");
    }
    if (m.contains("noise_amplitude")) {
      setup.model.noise_amplitude = Number(m["noise_amplitude"], "model.noise_amplitude");
    }
  }
  if (doc.contains("sim")) {
    const json& s = Object(doc, "sim", "simulation config");
    RejectUnknown(s, {"seed", "n_approaches", "clear_hours", "segments", "approach_speed",
                      "frame_interval", "scenario_mix"},
                  "sim");
    auto count = [&](const char* key, std::size_t& field) {
      if (!s.contains(key)) return;
      if (!s[key].is_number_unsigned()) throw ConfigError(std::string("sim.") + key + " must be a non-negative integer");
      field = s[key].get<std::size_t>();
    };
    if (s.contains("seed")) {
      if (!s["seed"].is_number_unsigned()) throw ConfigError("sim.seed must be a non-negative integer");
      setup.sim.seed = s["seed"].get<std::uint64_t>();
    }
    count("n_approaches", setup.sim.n_approaches);
    count("segments", setup.sim.n_segments);
    if (s.contains("clear_hours")) {
      setup.sim.clear_hours = units::ParseHours(Quantity(s["clear_hours"], "sim.clear_hours"), "sim.clear_hours");
    }
    if (s.contains("approach_speed")) {
      setup.sim.approach_speed_ms =
          units::ParseSpeed(Quantity(s["approach_speed"], "sim.approach_speed"), "sim.approach_speed");
    }
    if (s.contains("frame_interval")) {
      setup.sim.frame_interval_m =
          units::ParseDistance(Quantity(s["frame_interval"], "sim.frame_interval"), "sim.frame_interval");
    }
    if (s.contains("scenario_mix")) {
      const json& mix = s["scenario_mix"];
      if (!mix.is_object()) throw ConfigError("sim.scenario_mix must be an object");
      setup.sim.scenario_mix.clear();
      for (const auto& [name, w] : mix.items()) {
        setup.sim.scenario_mix[name] = Number(w, "sim.scenario_mix." + name);
      }
    }
  }
  if (doc.contains("output")) {
    if (!doc["output"].is_string() || doc["output"].get<std::string>().empty()) {
      throw ConfigError("output must be a non-empty string");
    }
    setup.output = doc["output"].get<std::string>();
  }
  if (const std::string e = CheckModel(setup.model); !e.empty()) throw ConfigError("model: " + e);
  if (const std::string e = CheckSimConfig(setup.sim); !e.empty()) throw ConfigError("sim: " + e);
  return setup;
}

SimSetup LoadSimSetup(const std::string& path) { return ParseSimSetup(ReadTextFile(path)); }

}  // namespace odmetric
