#include "odmetric/units.h"

#include <charconv>
#include <cmath>
#include <string>
#include <utility>

#include "odmetric/error.h"

namespace odmetric::units {
namespace {

struct UnitFactor {
  std::string_view suffix;
  double factor;
  bool divide;  // value / factor instead of value * factor
};

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double ParseWith(std::string_view text, std::string_view what,
                 std::initializer_list<UnitFactor> units, std::string_view kind) {
  const std::string_view trimmed = Trim(text);
  double value = 0.0;
  const char* begin = trimmed.data();
  const char* end = begin + trimmed.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr == begin) {
    throw ConfigError(std::string(what) + ": expected a number with a " +
                      std::string(kind) + " unit, got \"" + std::string(text) + "\"");
  }
  if (!std::isfinite(value)) {
    throw ConfigError(std::string(what) + ": value is not finite");
  }
  const std::string_view suffix = Trim(std::string_view(ptr, end - ptr));
  if (suffix.empty()) {
    throw ConfigError(std::string(what) + ": missing " + std::string(kind) +
                      " unit in \"" + std::string(text) + "\"");
  }
  for (const UnitFactor& u : units) {
    if (u.suffix == suffix) return u.divide ? value / u.factor : value * u.factor;
  }
  throw ConfigError(std::string(what) + ": unknown " + std::string(kind) + " unit \"" +
                    std::string(suffix) + "\"");
}

}  // namespace

double ParseSpeed(std::string_view text, std::string_view what) {
  // km/h goes through KmhToMs so the stored value is exactly kmh / 3.6.
  return ParseWith(text, what, {{"km/h", 3.6, true}, {"m/s", 1.0, false}}, "speed");
}

double ParseDistance(std::string_view text, std::string_view what) {
  return ParseWith(text, what, {{"m", 1.0, false}, {"km", 1000.0, false}}, "distance");
}

double ParseDeceleration(std::string_view text, std::string_view what) {
  return ParseWith(text, what, {{"m/s^2", 1.0, false}, {"m/s2", 1.0, false}},
                   "deceleration");
}

double ParseDuration(std::string_view text, std::string_view what) {
  return ParseWith(text, what,
                   {{"s", 1.0, false}, {"min", 60.0, false}, {"h", kSecondsPerHour, false}},
                   "duration");
}

double ParseHours(std::string_view text, std::string_view what) {
  return ParseWith(text, what,
                   {{"h", 1.0, false}, {"min", 60.0, true}, {"s", kSecondsPerHour, true}},
                   "duration");
}

double ParseRatePerHour(std::string_view text, std::string_view what) {
  return ParseWith(text, what, {{"/h", 1.0, false}, {"1/h", 1.0, false}}, "rate");
}

}  // namespace odmetric::units
