#pragma once

#include <string>
#include <string_view>

#include "meolb/timeutil.hpp"

namespace meolb {

/// Near-circular elements read from a two-line element set.
struct TleElements {
  TimePoint epoch{};
  double inclination_deg = 0.0;
  double raan_deg = 0.0;
  double eccentricity = 0.0;
  double arg_perigee_deg = 0.0;
  double mean_anomaly_deg = 0.0;
  double mean_motion_rev_per_day = 0.0;

  double semi_major_axis_km() const;
  double mean_motion_rad_s() const;
};

/// Throws std::invalid_argument on malformed lines.
TleElements parse_tle(std::string_view line1, std::string_view line2);

/// Greenwich mean sidereal angle (IAU 1982), degrees in [0, 360).
double gmst_deg(TimePoint t);

}  // namespace meolb
