#include "meolb/geometry.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace meolb {

double ConstellationSpec::angular_rate() const {
  const double a = orbit_radius_km();
  return std::sqrt(constants::kEarthMu / (a * a * a));
}

double ConstellationSpec::orbital_period_s() const { return 2.0 * constants::kPi / angular_rate(); }

std::string ConstellationSpec::name(int k) const {
  if (k >= 0 && static_cast<std::size_t>(k) < names.size()) return names[static_cast<std::size_t>(k)];
  return fmt::format("SAT{:02d}", k + 1);
}

void ConstellationSpec::validate() const {
  if (satellite_count < 2) {
    throw ScenarioError(fmt::format("$.constellation.satellite_count: need at least 2 satellites, got {}",
                                    satellite_count));
  }
  if (!(altitude_km > 0.0)) throw ScenarioError("$.constellation.altitude_km: must be > 0");
  if (!(inclination_deg >= 0.0 && inclination_deg <= 180.0)) {
    throw ScenarioError("$.constellation.inclination_deg: must lie in [0, 180]");
  }
  if (phase_offsets_deg.size() != static_cast<std::size_t>(satellite_count)) {
    throw ScenarioError(fmt::format("$.constellation.phase_offsets_deg: expected {} entries, got {}",
                                    satellite_count, phase_offsets_deg.size()));
  }
  for (std::size_t k = 0; k < phase_offsets_deg.size(); ++k) {
    const double p = phase_offsets_deg[k];
    if (!(p >= 0.0 && p < 360.0)) {
      throw ScenarioError(fmt::format("$.constellation.phase_offsets_deg[{}]: must lie in [0, 360)", k));
    }
    if (k > 0 && !(p > phase_offsets_deg[k - 1])) {
      throw ScenarioError(
          fmt::format("$.constellation.phase_offsets_deg[{}]: offsets must be strictly increasing", k));
    }
  }
  if (!names.empty() && names.size() != static_cast<std::size_t>(satellite_count)) {
    throw ScenarioError(fmt::format("$.constellation.satellite_names: expected {} entries, got {}",
                                    satellite_count, names.size()));
  }
}

void GroundStationSpec::validate(const std::string& path) const {
  if (id.empty()) throw ScenarioError(path + ".id: must be non-empty");
  if (!(std::abs(latitude_deg) <= 90.0)) throw ScenarioError(path + ".latitude_deg: |lat| must be <= 90");
  if (!(longitude_deg >= -180.0 && longitude_deg < 180.0)) {
    throw ScenarioError(path + ".longitude_deg: must lie in [-180, 180)");
  }
  if (!(min_elevation_deg >= 0.0 && min_elevation_deg < 90.0)) {
    throw ScenarioError(path + ".min_elevation_deg: must lie in [0, 90)");
  }
  if (!std::isfinite(altitude_m)) throw ScenarioError(path + ".altitude_m: must be finite");
}

std::vector<Vec3> propagate_inertial(const ConstellationSpec& spec, TimePoint time) {
  const double dt = seconds_between(spec.epoch, time);
  const double radius = spec.orbit_radius_km();
  const double advance = spec.angular_rate() * dt;
  const double ci = std::cos(deg2rad(spec.inclination_deg));
  const double si = std::sin(deg2rad(spec.inclination_deg));
  const double co = std::cos(deg2rad(spec.raan_deg));
  const double so = std::sin(deg2rad(spec.raan_deg));

  std::vector<Vec3> out;
  out.reserve(spec.phase_offsets_deg.size());
  for (double phase : spec.phase_offsets_deg) {
    const double u = deg2rad(phase) + advance;
    const double xp = radius * std::cos(u);
    const double yp = radius * std::sin(u) * ci;
    const double zp = radius * std::sin(u) * si;
    out.push_back({xp * co - yp * so, xp * so + yp * co, zp});
  }
  return out;
}

std::vector<Vec3> propagate(const ConstellationSpec& spec, TimePoint time) {
  const double theta = constants::kEarthRotationRate * seconds_between(spec.epoch, time);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  std::vector<Vec3> out = propagate_inertial(spec, time);
  for (Vec3& p : out) {
    p = {p.x * c + p.y * s, -p.x * s + p.y * c, p.z};
  }
  return out;
}

Vec3 geodetic_to_ecef(double lat_deg, double lon_deg, double alt_m, EarthModel model) {
  const double lat = deg2rad(lat_deg);
  const double lon = deg2rad(lon_deg);
  const double h = alt_m / 1000.0;
  if (model == EarthModel::kSpherical) {
    const double r = constants::kEarthRadiusKm + h;
    return {r * std::cos(lat) * std::cos(lon), r * std::cos(lat) * std::sin(lon), r * std::sin(lat)};
  }
  const double e2 = constants::kWgs84F * (2.0 - constants::kWgs84F);
  const double sl = std::sin(lat);
  const double n = constants::kWgs84A / std::sqrt(1.0 - e2 * sl * sl);
  return {(n + h) * std::cos(lat) * std::cos(lon), (n + h) * std::cos(lat) * std::sin(lon),
          (n * (1.0 - e2) + h) * sl};
}

double elevation_angle(const Vec3& sat, const Vec3& gs) {
  const Vec3 ray = sat - gs;
  const double s = ray.dot(gs.normalized()) / ray.norm();
  return rad2deg(std::asin(std::clamp(s, -1.0, 1.0)));
}

double off_nadir_angle(const Vec3& sat, const Vec3& gs) {
  const Vec3 nadir = (-sat).normalized();
  const Vec3 ray = (gs - sat).normalized();
  return rad2deg(std::acos(std::clamp(nadir.dot(ray), -1.0, 1.0)));
}

SlotGeometry build_slot_geometry(const ConstellationSpec& constellation,
                                 std::span<const GroundStationSpec> stations, int slot_index,
                                 TimePoint time) {
  SlotGeometry g;
  g.slot_index = slot_index;
  g.time = time;
  g.sat_positions = propagate(constellation, time);
  g.gs_positions.reserve(stations.size());
  for (const auto& gs : stations) {
    g.gs_positions.push_back(geodetic_to_ecef(gs.latitude_deg, gs.longitude_deg, gs.altitude_m));
  }

  const std::size_t k_count = g.sat_positions.size();
  const std::size_t i_count = g.gs_positions.size();
  g.distances_fl = Grid<double>(k_count, i_count);
  g.elevations = Grid<double>(k_count, i_count);
  g.off_nadir = Grid<double>(k_count, i_count);
  g.visible = Grid<std::uint8_t>(k_count, i_count);
  g.distances_isl = Grid<double>(k_count, k_count);

  for (std::size_t k = 0; k < k_count; ++k) {
    const Vec3& sat = g.sat_positions[k];
    for (std::size_t i = 0; i < i_count; ++i) {
      const Vec3& gs = g.gs_positions[i];
      const double el = elevation_angle(sat, gs);
      g.distances_fl(k, i) = (sat - gs).norm();
      g.elevations(k, i) = el;
      g.off_nadir(k, i) = off_nadir_angle(sat, gs);
      g.visible(k, i) = el >= stations[i].min_elevation_deg ? 1 : 0;
    }
    for (std::size_t l = 0; l < k_count; ++l) {
      g.distances_isl(k, l) = k == l ? 0.0 : (sat - g.sat_positions[l]).norm();
    }
  }
  return g;
}

}  // namespace meolb
