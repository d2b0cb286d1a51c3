#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "meolb/core.hpp"
#include "meolb/timeutil.hpp"

namespace meolb {

/// Single-plane circular constellation. Satellites are ordered by orbital phase,
/// which also fixes the ISL ring (k-1, k+1 mod K).
struct ConstellationSpec {
  std::vector<std::string> names;  // optional display names, size K when present
  int satellite_count = 0;
  double altitude_km = 0.0;
  double inclination_deg = 0.0;
  double raan_deg = 0.0;
  std::vector<double> phase_offsets_deg;  // argument of latitude at epoch (ECEF longitude when equatorial)
  TimePoint epoch{};

  /// Mean motion sqrt(mu / a^3), rad/s.
  double angular_rate() const;
  double orbital_period_s() const;
  double orbit_radius_km() const { return constants::kEarthRadiusKm + altitude_km; }
  std::string name(int k) const;

  /// Throws ScenarioError ("constellation.<field>: ...") on invariant violations.
  void validate() const;
  bool operator==(const ConstellationSpec&) const = default;
};

struct GroundStationSpec {
  std::string id;
  double latitude_deg = 0.0;
  double longitude_deg = 0.0;
  double altitude_m = 0.0;
  double min_elevation_deg = 5.0;

  void validate(const std::string& path) const;
  bool operator==(const GroundStationSpec&) const = default;
};

enum class EarthModel { kSpherical, kWgs84 };

/// ECEF (km) of every satellite. At epoch the frame is aligned with the inertial one.
std::vector<Vec3> propagate(const ConstellationSpec& spec, TimePoint time);

/// Same orbit expressed in the inertial frame that coincides with ECEF at epoch.
std::vector<Vec3> propagate_inertial(const ConstellationSpec& spec, TimePoint time);

Vec3 geodetic_to_ecef(double lat_deg, double lon_deg, double alt_m,
                      EarthModel model = EarthModel::kSpherical);

/// Angle above the local (geocentric) horizon at `gs` towards `sat`, degrees.
double elevation_angle(const Vec3& sat, const Vec3& gs);

/// Angle between the satellite nadir direction and the satellite→GS ray, degrees.
double off_nadir_angle(const Vec3& sat, const Vec3& gs);

struct SlotGeometry {
  int slot_index = 0;
  TimePoint time{};
  std::vector<Vec3> sat_positions;
  std::vector<Vec3> gs_positions;
  Grid<double> distances_fl;    // K×I, km
  Grid<double> distances_isl;   // K×K, km
  Grid<double> elevations;      // K×I, deg
  Grid<double> off_nadir;       // K×I, deg
  Grid<std::uint8_t> visible;   // K×I

  std::size_t satellite_count() const { return sat_positions.size(); }
  std::size_t station_count() const { return gs_positions.size(); }
  bool is_visible(std::size_t k, std::size_t i) const { return visible(k, i) != 0; }
};

SlotGeometry build_slot_geometry(const ConstellationSpec& constellation,
                                 std::span<const GroundStationSpec> stations, int slot_index,
                                 TimePoint time);

}  // namespace meolb
