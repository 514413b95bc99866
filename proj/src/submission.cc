#include "odmetric/submission.h"

#include <cmath>

#include "json.hpp"
#include "odmetric/error.h"

namespace odmetric {

ValidationReport ValidateSubmission(const SubmissionRecord& record) {
  ValidationReport report;
  auto violate = [&report](std::string what) {
    report.pass = false;
    report.violations.push_back(std::move(what));
  };
  if (record.system_name.empty()) violate("empty system name");
  if (!std::isfinite(record.x_percent)) {
    violate("x_percent not finite");
  } else if (!(record.x_percent > 0.0 && record.x_percent <= 100.0)) {
    violate("x_percent out of (0,100]");
  }
  if (!std::isfinite(record.fp_rate_per_h)) {
    violate("fp_per_h not finite");
  } else if (record.fp_rate_per_h < 0.0) {
    violate("negative rate");
  }
  if (!std::isfinite(record.min_distance_m)) {
    violate("dist_m not finite");
  } else if (record.min_distance_m < 0.0) {
    violate("negative distance");
  }
  return report;
}

std::vector<SubmissionRecord> ParseSubmissions(std::string_view text) {
  using nlohmann::json;
  using Kind = ParseError::Kind;
  std::vector<SubmissionRecord> records;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(Kind::kSyntax, line_no, std::string("malformed record: ") + e.what());
    }
    if (!record.is_object()) throw ParseError(Kind::kSyntax, line_no, "record must be a JSON object");
    for (const auto& [key, value] : record.items()) {
      if (key != "system" && key != "x" && key != "fp_per_h" && key != "dist_m") {
        throw ParseError(Kind::kSchema, line_no, "unknown field \"" + key + "\"");
      }
    }
    auto number = [&](const char* name) {
      const auto it = record.find(name);
      if (it == record.end()) {
        throw ParseError(Kind::kSchema, line_no, std::string("missing field \"") + name + "\"");
      }
      if (!it->is_number()) {
        throw ParseError(Kind::kSchema, line_no, std::string("field \"") + name + "\" must be a number");
      }
      return it->get<double>();
    };
    const auto system = record.find("system");
    if (system == record.end()) throw ParseError(Kind::kSchema, line_no, "missing field \"system\"");
    if (!system->is_string()) throw ParseError(Kind::kSchema, line_no, "field \"system\" must be a string");
    records.push_back({system->get<std::string>(), number("x"), number("fp_per_h"), number("dist_m")});
  }
  return records;
}

std::string SerializeSubmission(const SubmissionRecord& record) {
  nlohmann::ordered_json j;
  j["system"] = record.system_name;
  j["x"] = record.x_percent;
  j["fp_per_h"] = record.fp_rate_per_h;
  j["dist_m"] = record.min_distance_m;
  return j.dump();
}

}  // namespace odmetric
