#include "odmetric/log_io.h"

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"
#include "odmetric/error.h"

namespace odmetric {
namespace {

using nlohmann::json;
using Kind = ParseError::Kind;

class LineParser {
 public:
  LineParser(std::size_t line, const ParseOptions& options, std::vector<std::string>* warnings)
      : line_(line), options_(options), warnings_(warnings) {}

  [[noreturn]] void Fail(Kind kind, const std::string& what) const {
    throw ParseError(kind, line_, what);
  }

  void CheckFields(const json& object, std::initializer_list<const char*> allowed,
                   const std::string& where) const {
    for (const auto& [key, value] : object.items()) {
      bool known = false;
      for (const char* a : allowed) known = known || key == a;
      if (known) continue;
      if (!options_.lenient) Fail(Kind::kSchema, "unknown field \"" + key + "\" in " + where);
      if (warnings_) {
        warnings_->push_back("line " + std::to_string(line_) + ": ignored unknown field \"" +
                             key + "\" in " + where);
      }
    }
  }

  const json& Field(const json& object, const char* name, const std::string& where) const {
    const auto it = object.find(name);
    if (it == object.end()) Fail(Kind::kSchema, std::string("missing field \"") + name + "\" in " + where);
    return *it;
  }

  double Number(const json& object, const char* name, const std::string& where) const {
    const json& v = Field(object, name, where);
    if (!v.is_number()) Fail(Kind::kSchema, std::string("field \"") + name + "\" must be a number");
    return v.get<double>();
  }

  std::string String(const json& object, const char* name, const std::string& where) const {
    const json& v = Field(object, name, where);
    if (!v.is_string()) Fail(Kind::kSchema, std::string("field \"") + name + "\" must be a string");
    return v.get<std::string>();
  }

  bool Bool(const json& object, const char* name, const std::string& where) const {
    const json& v = Field(object, name, where);
    if (!v.is_boolean()) Fail(Kind::kSchema, std::string("field \"") + name + "\" must be a boolean");
    return v.get<bool>();
  }

  const json& Array(const json& object, const char* name, const std::string& where) const {
    const json& v = Field(object, name, where);
    if (!v.is_array()) Fail(Kind::kSchema, std::string("field \"") + name + "\" must be an array");
    return v;
  }

  ApproachTrace Approach(const json& record) const {
    CheckFields(record, {"type", "id", "class", "contacted", "frames"}, "approach");
    ApproachTrace trace;
    trace.id = String(record, "id", "approach");
    trace.obstacle_class = ObstacleClass::FromString(String(record, "class", "approach"));
    trace.contacted = Bool(record, "contacted", "approach");
    for (const json& f : Array(record, "frames", "approach")) {
      if (!f.is_object()) Fail(Kind::kSchema, "frame must be an object");
      CheckFields(f, {"d", "t", "s"}, "frame");
      trace.frames.push_back({Number(f, "d", "frame"), Number(f, "t", "frame"),
                              Number(f, "s", "frame")});
    }
    if (const std::string violation = CheckTrace(trace); !violation.empty()) {
      Fail(Kind::kInvariant, violation);
    }
    return trace;
  }

  ClearSegment Clear(const json& record) const {
    CheckFields(record, {"type", "id", "hours", "alarms"}, "clear");
    ClearSegment segment;
    segment.id = String(record, "id", "clear");
    segment.duration_h = Number(record, "hours", "clear");
    for (const json& a : Array(record, "alarms", "clear")) {
      if (!a.is_object()) Fail(Kind::kSchema, "alarm must be an object");
      CheckFields(a, {"t", "s"}, "alarm");
      segment.alarms.push_back({Number(a, "t", "alarm"), Number(a, "s", "alarm")});
    }
    if (const std::string violation = CheckSegment(segment); !violation.empty()) {
      Fail(Kind::kInvariant, violation);
    }
    return segment;
  }

  void Meta(const json& record, std::map<std::string, std::string>& meta) const {
    CheckFields(record, {"type", "values"}, "meta");
    const json& values = Field(record, "values", "meta");
    if (!values.is_object()) Fail(Kind::kSchema, "field \"values\" must be an object");
    for (const auto& [key, value] : values.items()) {
      if (!value.is_string()) Fail(Kind::kSchema, "meta value \"" + key + "\" must be a string");
      if (!meta.emplace(key, value.get<std::string>()).second) {
        Fail(Kind::kInvariant, "duplicate meta key \"" + key + "\"");
      }
    }
  }

 private:
  std::size_t line_;
  const ParseOptions& options_;
  std::vector<std::string>* warnings_;
};

}  // namespace

LogBundle ParseLog(std::string_view text, const ParseOptions& options,
                   std::vector<std::string>* warnings) {
  LogBundle bundle;
  std::set<std::string> approach_ids;
  std::set<std::string> segment_ids;
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

    const LineParser parser(line_no, options, warnings);
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      parser.Fail(Kind::kSyntax, std::string("malformed record: ") + e.what());
    }
    if (!record.is_object()) parser.Fail(Kind::kSyntax, "record must be a JSON object");
    const std::string type = parser.String(record, "type", "record");
    if (type == "approach") {
      ApproachTrace trace = parser.Approach(record);
      if (!approach_ids.insert(trace.id).second) {
        parser.Fail(Kind::kInvariant, "duplicate approach id \"" + trace.id + "\"");
      }
      bundle.approaches.push_back(std::move(trace));
    } else if (type == "clear") {
      ClearSegment segment = parser.Clear(record);
      if (!segment_ids.insert(segment.id).second) {
        parser.Fail(Kind::kInvariant, "duplicate segment id \"" + segment.id + "\"");
      }
      bundle.segments.push_back(std::move(segment));
    } else if (type == "meta") {
      parser.Meta(record, bundle.meta);
    } else {
      parser.Fail(Kind::kSchema, "unknown record type \"" + type + "\"");
    }
  }
  return bundle;
}

LogBundle ReadLogFile(const std::string& path, const ParseOptions& options,
                      std::vector<std::string>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open log file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseLog(ss.str(), options, warnings);
}

std::string SerializeLog(const LogBundle& bundle) {
  using nlohmann::ordered_json;
  std::string out;
  if (!bundle.meta.empty()) {
    ordered_json record;
    record["type"] = "meta";
    record["values"] = ordered_json::object();
    for (const auto& [key, value] : bundle.meta) record["values"][key] = value;
    out += record.dump();
    out += '\n';
  }
  for (const ApproachTrace& trace : bundle.approaches) {
    ordered_json record;
    record["type"] = "approach";
    record["id"] = trace.id;
    record["class"] = trace.obstacle_class.ToString();
    record["contacted"] = trace.contacted;
    record["frames"] = ordered_json::array();
    for (const Frame& f : trace.frames) {
      record["frames"].push_back({{"d", f.distance_m}, {"t", f.time_s}, {"s", f.score}});
    }
    out += record.dump();
    out += '\n';
  }
  for (const ClearSegment& segment : bundle.segments) {
    ordered_json record;
    record["type"] = "clear";
    record["id"] = segment.id;
    record["hours"] = segment.duration_h;
    record["alarms"] = ordered_json::array();
    for (const AlarmEvent& a : segment.alarms) {
      record["alarms"].push_back({{"t", a.time_s}, {"s", a.score}});
    }
    out += record.dump();
    out += '\n';
  }
  return out;
}

}  // namespace odmetric
