#pragma once

#include <string_view>

namespace odmetric::units {

inline constexpr double kSecondsPerHour = 3600.0;

constexpr double KmhToMs(double kmh) { return kmh / 3.6; }
constexpr double MsToKmh(double ms) { return ms * 3.6; }

// Parsers for quantity strings with an explicit unit suffix such as
// "130 km/h" or "1e-4 /h". All return SI values (hours for rates). A bare
// number or an unknown suffix throws ConfigError; `what` names the field in
// the message.
double ParseSpeed(std::string_view text, std::string_view what);         // m/s
double ParseDistance(std::string_view text, std::string_view what);      // m
double ParseDeceleration(std::string_view text, std::string_view what);  // m/s^2
double ParseDuration(std::string_view text, std::string_view what);      // s
double ParseHours(std::string_view text, std::string_view what);         // h
double ParseRatePerHour(std::string_view text, std::string_view what);   // 1/h

}  // namespace odmetric::units
