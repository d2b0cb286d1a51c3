#include "meolb/tle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "meolb/core.hpp"

namespace meolb {

namespace {

double field(std::string_view line, std::size_t begin, std::size_t length, const char* what) {
  if (line.size() < begin + length) throw std::invalid_argument(std::string("TLE too short for ") + what);
  std::string text(line.substr(begin, length));
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("TLE field '") + what + "' is not numeric");
  }
}

}  // namespace

double TleElements::mean_motion_rad_s() const { return mean_motion_rev_per_day * 2.0 * constants::kPi / 86400.0; }

double TleElements::semi_major_axis_km() const {
  const double n = mean_motion_rad_s();
  return std::cbrt(constants::kEarthMu / (n * n));
}

TleElements parse_tle(std::string_view line1, std::string_view line2) {
  if (line1.empty() || line1[0] != '1') throw std::invalid_argument("TLE line 1 must start with '1'");
  if (line2.empty() || line2[0] != '2') throw std::invalid_argument("TLE line 2 must start with '2'");
  TleElements e;
  const double yy = field(line1, 18, 2, "epoch year");
  const double doy = field(line1, 20, 12, "epoch day");
  const int year = static_cast<int>(yy) + (yy < 57 ? 2000 : 1900);
  using namespace std::chrono;
  const sys_days jan1{std::chrono::year{year} / January / 1};
  e.epoch = time_point_cast<milliseconds>(jan1) + milliseconds(std::llround((doy - 1.0) * 86400000.0));
  e.inclination_deg = field(line2, 8, 8, "inclination");
  e.raan_deg = field(line2, 17, 8, "raan");
  e.eccentricity = field(line2, 26, 7, "eccentricity") * 1e-7;
  e.arg_perigee_deg = field(line2, 34, 8, "argument of perigee");
  e.mean_anomaly_deg = field(line2, 43, 8, "mean anomaly");
  e.mean_motion_rev_per_day = field(line2, 52, 11, "mean motion");
  if (!(e.mean_motion_rev_per_day > 0.0)) throw std::invalid_argument("TLE mean motion must be > 0");
  return e;
}

double gmst_deg(TimePoint t) {
  using namespace std::chrono;
  const double unix_days = duration<double, std::ratio<86400>>(t.time_since_epoch()).count();
  const double d = unix_days + 2440587.5 - 2451545.0;
  const double tc = d / 36525.0;
  double g = 280.46061837 + 360.98564736629 * d + 0.000387933 * tc * tc - tc * tc * tc / 38710000.0;
  g = std::fmod(g, 360.0);
  return g < 0.0 ? g + 360.0 : g;
}

}  // namespace meolb
