#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "meolb/channel.hpp"
#include "meolb/geometry.hpp"
#include "meolb/topology.hpp"

namespace meolb {

struct TimeGrid {
  TimePoint start{};
  std::int64_t duration_s = 86400;
  std::int64_t slot_s = 300;

  int slot_count() const { return static_cast<int>(duration_s / slot_s); }
  TimePoint slot_start(int n) const { return start + std::chrono::seconds(slot_s * n); }
  /// Geometry and rain state are sampled at the slot midpoint.
  TimePoint slot_midpoint(int n) const { return add_seconds(slot_start(n), 0.5 * static_cast<double>(slot_s)); }
  bool operator==(const TimeGrid&) const = default;
};

struct Policies {
  ServingPolicy serving_gs = ServingPolicy::kBestCapacity;
  bool lexicographic = true;
  bool isl_enabled = true;
  bool distinct_relay_destination = false;
  bool operator==(const Policies&) const = default;
};

struct Scenario {
  std::string name;
  std::string description;
  ConstellationSpec constellation;
  std::vector<GroundStationSpec> ground_stations;
  LinkParams links;
  std::vector<RainEvent> rain_events;
  TimeGrid time;
  Policies policies;

  /// Cross-field checks (station ids unique, rain events reference known stations, grid sane).
  void validate() const;
  int station_index(std::string_view id) const;  // -1 when unknown
  bool operator==(const Scenario&) const = default;
};

/// Strict reader: unknown keys and type mismatches raise ScenarioError with a JSON path
/// such as "$.feeder_link.eirp_dbw". Omitted link parameters take their defaults.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::filesystem::path& path);

/// Fully expanded document (every default written out).
nlohmann::json scenario_to_json(const Scenario& scenario);

}  // namespace meolb
