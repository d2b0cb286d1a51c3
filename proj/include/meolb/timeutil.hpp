#pragma once

#include <chrono>
#include <cmath>
#include <string>
#include <string_view>

namespace meolb {

using TimePoint = std::chrono::sys_time<std::chrono::milliseconds>;

/// Parses "YYYY-MM-DDTHH:MM:SS[.fff]Z" (UTC only). Throws std::invalid_argument.
TimePoint parse_timestamp(std::string_view text);

/// ISO-8601 UTC, millisecond suffix only when non-zero.
std::string format_timestamp(TimePoint t);

inline double seconds_between(TimePoint from, TimePoint to) {
  return std::chrono::duration<double>(to - from).count();
}

inline TimePoint add_seconds(TimePoint t, double seconds) {
  return t + std::chrono::milliseconds(static_cast<long long>(std::llround(seconds * 1000.0)));
}

}  // namespace meolb
