#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fmt/format.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "meolb/scenario.hpp"
#include "meolb/tle.hpp"

using namespace meolb;
using nlohmann::json;

namespace {

std::string scenario_path(const std::string& name) { return std::string(MEOLB_SCENARIO_DIR) + "/" + name; }

json minimal() {
  return json::parse(R"({
    "constellation": {"epoch": "2026-01-01T00:00:00Z", "satellite_count": 3, "altitude_km": 8062},
    "ground_stations": [{"id": "GS", "latitude_deg": 0, "longitude_deg": 0}],
    "time": {"start": "2026-01-01T00:00:00Z"}
  })");
}

std::string error_of(const json& doc) {
  try {
    (void)parse_scenario(doc);
  } catch (const ScenarioError& e) {
    return e.what();
  }
  return "";
}

int tle_checksum(const std::string& line) {
  int sum = 0;
  for (char c : line) {
    if (c >= '0' && c <= '9') sum += c - '0';
    if (c == '-') sum += 1;
  }
  return sum % 10;
}

/// Circular element set in the fixed-column layout, epoch as day-of-year of 2026.
std::pair<std::string, std::string> tle_pair(int catalog, double doy, double inc, double raan, double argp, double ma,
                                             double rev_per_day) {
  std::string l1 = fmt::format("1 {:05d}U 26001A   26{:012.8f}  .00000000  00000-0  00000-0 0  999", catalog, doy);
  l1 += std::to_string(tle_checksum(l1));
  std::string l2 = fmt::format("2 {:05d} {:8.4f} {:8.4f} 0000001 {:8.4f} {:8.4f} {:11.8f}    1", catalog, inc, raan,
                               argp, ma, rev_per_day);
  l2 += std::to_string(tle_checksum(l2));
  return {l1, l2};
}

}  // namespace

TEST_CASE("bundled scenarios load") {
  const Scenario clear = load_scenario(scenario_path("o3b_clear.json"));
  CHECK(clear.constellation.satellite_count == 6);
  CHECK(clear.ground_stations.size() == 8);
  CHECK(clear.time.slot_count() == 288);
  CHECK(clear.rain_events.empty());
  CHECK(clear.policies.lexicographic);
  CHECK(clear.policies.isl_enabled);
  const Scenario rain = load_scenario(scenario_path("o3b_rain.json"));
  CHECK(rain.rain_events.size() == 3);
  CHECK(rain.station_index("Santiago") >= 0);
  CHECK(rain.station_index("Nowhere") == -1);
  for (const char* name : {"toy2.json", "toy3.json", "isolated.json"}) {
    CAPTURE(name);
    CHECK_NOTHROW((void)load_scenario(scenario_path(name)));
  }
}

TEST_CASE("omitted link parameters take their defaults") {
  const Scenario s = parse_scenario(minimal());
  CHECK(s.links == LinkParams{});
  CHECK(s.policies == Policies{});
  CHECK(s.time.duration_s == 86400);
  CHECK(s.time.slot_s == 300);
  CHECK(s.ground_stations[0].altitude_m == 0.0);
  CHECK(s.ground_stations[0].min_elevation_deg == 5.0);
  REQUIRE(s.constellation.phase_offsets_deg.size() == 3);
  CHECK(s.constellation.phase_offsets_deg[1] == doctest::Approx(120.0));
  CHECK(s.links.feeder.eirp_dbw == 49.7);
  CHECK(s.links.feeder.rx_gt_dbk == 7.0);
  CHECK(s.links.feeder.carrier_frequency_hz == 20e9);
}

TEST_CASE("unknown keys are rejected with their path") {
  json doc = minimal();
  doc["extra"] = 1;
  CHECK(error_of(doc) == "$.extra: unknown key");

  doc = minimal();
  doc["feeder_link"] = {{"eirp_dbww", 50.0}};
  CHECK(error_of(doc) == "$.feeder_link.eirp_dbww: unknown key");

  doc = minimal();
  doc["ground_stations"][0]["elevation"] = 10;
  CHECK(error_of(doc) == "$.ground_stations[0].elevation: unknown key");

  doc = minimal();
  doc["policies"] = {{"lexicografic", false}};
  CHECK(error_of(doc) == "$.policies.lexicografic: unknown key");
}

TEST_CASE("type and value errors name the field") {
  json doc = minimal();
  doc["time"]["duration_s"] = 3600.5;
  CHECK(error_of(doc) == "$.time.duration_s: expected an integer");

  doc = minimal();
  doc["feeder_link"] = {{"bandwidth_hz", "100 MHz"}};
  CHECK(error_of(doc) == "$.feeder_link.bandwidth_hz: expected a number");

  doc = minimal();
  doc["constellation"].erase("altitude_km");
  CHECK(error_of(doc) == "$.constellation.altitude_km: required field is missing");

  doc = minimal();
  doc["policies"] = {{"isl_enabled", 1}};
  CHECK(error_of(doc) == "$.policies.isl_enabled: expected true or false");

  doc = minimal();
  doc["policies"] = {{"serving_gs", "round-robin"}};
  CHECK(error_of(doc).rfind("$.policies.serving_gs:", 0) == 0);

  doc = minimal();
  doc["feeder_link"] = {{"bandwidth_hz", -1.0}};
  CHECK(error_of(doc).rfind("$.feeder_link.bandwidth_hz", 0) == 0);

  doc = minimal();
  doc["time"]["start"] = "yesterday";
  CHECK(error_of(doc).rfind("$.time.start", 0) == 0);
}

TEST_CASE("cross-field checks") {
  json doc = minimal();
  doc["ground_stations"].push_back(doc["ground_stations"][0]);
  CHECK(error_of(doc) == "$.ground_stations[1].id: duplicate station id");

  doc = minimal();
  doc["rain_events"] = json::array(
      {{{"gs", "Elsewhere"}, {"start", "2026-01-01T01:00:00Z"}, {"end", "2026-01-01T02:00:00Z"}, {"rain_rate_mmh", 5}}});
  CHECK(error_of(doc) == "$.rain_events[0].gs: unknown ground station 'Elsewhere'");

  doc = minimal();
  doc["rain_events"] = json::array(
      {{{"gs", "GS"}, {"start", "2026-01-01T02:00:00Z"}, {"end", "2026-01-01T01:00:00Z"}, {"rain_rate_mmh", 5}}});
  CHECK(error_of(doc) == "$.rain_events[0]: start must precede end");

  doc = minimal();
  doc["time"]["slot_s"] = 7;
  CHECK(error_of(doc) == "$.time.duration_s: must be a multiple of slot_s");

  doc = minimal();
  doc["time"]["start"] = "2025-12-31T23:00:00Z";
  CHECK(error_of(doc) == "$.time.start: must not precede the constellation epoch");

  doc = minimal();
  doc["ground_stations"] = json::array();
  CHECK(error_of(doc) == "$.ground_stations: need at least one ground station");
}

TEST_CASE("file errors") {
  CHECK_THROWS_AS((void)load_scenario(scenario_path("does_not_exist.json")), ScenarioError);
  const auto bad = std::filesystem::temp_directory_path() / "meolb_bad.json";
  std::ofstream(bad) << "{ \"name\": ";
  CHECK_THROWS_WITH_AS((void)load_scenario(bad), doctest::Contains("invalid JSON"), ScenarioError);
  std::filesystem::remove(bad);
}

TEST_CASE("expanded document round-trips") {
  for (const char* name : {"o3b_clear.json", "o3b_rain.json", "toy3.json", "isolated.json"}) {
    CAPTURE(name);
    const Scenario s = load_scenario(scenario_path(name));
    const json expanded = scenario_to_json(s);
    CHECK(parse_scenario(expanded) == s);
    CHECK(parse_scenario(json::parse(expanded.dump())) == s);
    CHECK(scenario_to_json(parse_scenario(expanded)) == expanded);
  }
  const Scenario m = parse_scenario(minimal());
  CHECK(parse_scenario(scenario_to_json(m)) == m);
  // every default is written out
  const json e = scenario_to_json(m);
  for (const char* key : {"feeder_link", "isl", "rain_model", "policies", "rain_events"}) CHECK(e.contains(key));
}

TEST_CASE("two-line element sets") {
  SUBCASE("field layout") {
    const TleElements e = parse_tle("1 25544U 98067A   08264.51782528 -.00002182  00000-0 -11606-4 0  2927",
                                    "2 25544  51.6416 247.4627 0006703 130.5360 325.0288 15.72125391563537");
    CHECK(e.inclination_deg == doctest::Approx(51.6416));
    CHECK(e.raan_deg == doctest::Approx(247.4627));
    CHECK(e.eccentricity == doctest::Approx(0.0006703));
    CHECK(e.arg_perigee_deg == doctest::Approx(130.5360));
    CHECK(e.mean_anomaly_deg == doctest::Approx(325.0288));
    CHECK(e.mean_motion_rev_per_day == doctest::Approx(15.72125391));
    CHECK(format_timestamp(e.epoch) == "2008-09-20T12:25:40.104Z");
    CHECK_THROWS_AS((void)parse_tle("2 25544U", "2 25544"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_tle("1 25544U 98067A   08264.5", "2 25544  51.6416"), std::invalid_argument);
  }
  SUBCASE("equatorial constellation from element sets") {
    // mean motion of a circular orbit at 8062 km altitude
    constexpr double kMu = 398600.4418;
    const double a = 6371.0 + 8062.0;
    const double rev_per_day = std::sqrt(kMu / (a * a * a)) * 86400.0 / (2.0 * 3.14159265358979323846);
    const TimePoint epoch = parse_timestamp("2026-01-01T00:00:00Z");
    const double gmst = gmst_deg(epoch);
    json doc = minimal();
    json list = json::array();
    // listed out of phase order, with the phase split between perigee and anomaly
    for (int k : {2, 0, 1}) {
      const double phase = std::fmod(10.0 + 120.0 * k + gmst, 360.0);
      const auto [l1, l2] = tle_pair(40000 + k, 1.0, 0.0, 0.0, 0.5 * phase, 0.5 * phase, rev_per_day);
      list.push_back({{"name", fmt::format("S{}", k)}, {"line1", l1}, {"line2", l2}});
    }
    doc["constellation"] = {{"epoch", "2026-01-01T00:00:00Z"}, {"tle", list}};
    const Scenario s = parse_scenario(doc);
    const auto& c = s.constellation;
    CHECK(c.satellite_count == 3);
    CHECK(c.names == std::vector<std::string>{"S0", "S1", "S2"});
    CHECK(c.altitude_km == doctest::Approx(8062.0).epsilon(1e-6));
    CHECK(c.inclination_deg == 0.0);
    // angles carry four decimals in the element set
    for (int k = 0; k < 3; ++k) CHECK(std::abs(c.phase_offsets_deg[static_cast<std::size_t>(k)] - (10.0 + 120.0 * k)) < 2e-4);

    doc["constellation"]["satellite_count"] = 3;
    CHECK(error_of(doc) == "$.constellation.satellite_count: not allowed together with tle");
  }
}
