#include "meolb/scenario.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include "meolb/tle.hpp"

namespace meolb {

using nlohmann::json;

namespace {

/// Strict view over one JSON object: remembers consumed keys so leftovers can be rejected.
class ObjectReader {
 public:
  ObjectReader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ScenarioError(path_ + ": expected an object");
  }

  std::string child(std::string_view key) const { return path_ + "." + std::string(key); }

  bool has(const std::string& key) {
    seen_.insert(key);
    return node_.contains(key);
  }

  const json& at(const std::string& key) {
    if (!has(key)) throw ScenarioError(child(key) + ": required field is missing");
    return node_.at(key);
  }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
    if (!has(key)) {
      if (fallback) return *fallback;
      throw ScenarioError(child(key) + ": required field is missing");
    }
    const json& v = node_.at(key);
    if (!v.is_number()) throw ScenarioError(child(key) + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ScenarioError(child(key) + ": expected a finite number");
    return d;
  }

  std::optional<double> nullable_number(const std::string& key, std::optional<double> fallback) {
    if (!has(key)) return fallback;
    if (node_.at(key).is_null()) return std::nullopt;
    return number(key);
  }

  std::int64_t integer(const std::string& key, std::optional<std::int64_t> fallback = std::nullopt) {
    if (!has(key)) {
      if (fallback) return *fallback;
      throw ScenarioError(child(key) + ": required field is missing");
    }
    const json& v = node_.at(key);
    if (!v.is_number_integer()) throw ScenarioError(child(key) + ": expected an integer");
    return v.get<std::int64_t>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_boolean()) throw ScenarioError(child(key) + ": expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
    if (!has(key)) {
      if (fallback) return *fallback;
      throw ScenarioError(child(key) + ": required field is missing");
    }
    const json& v = node_.at(key);
    if (!v.is_string()) throw ScenarioError(child(key) + ": expected a string");
    return v.get<std::string>();
  }

  TimePoint timestamp(const std::string& key) {
    const std::string text = string(key);
    try {
      return parse_timestamp(text);
    } catch (const std::invalid_argument& e) {
      throw ScenarioError(child(key) + ": " + e.what());
    }
  }

  const json& array(const std::string& key) {
    const json& v = at(key);
    if (!v.is_array()) throw ScenarioError(child(key) + ": expected an array");
    return v;
  }

  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!seen_.contains(it.key())) throw ScenarioError(child(it.key()) + ": unknown key");
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

double wrap360(double deg) {
  double w = std::fmod(deg, 360.0);
  if (w < 0.0) w += 360.0;
  return w >= 360.0 ? 0.0 : w;
}

void read_tle_constellation(const json& list, const std::string& path, ConstellationSpec& c) {
  struct Entry {
    std::string name;
    TleElements elements;
    double phase = 0.0;
  };
  std::vector<Entry> entries;
  for (std::size_t n = 0; n < list.size(); ++n) {
    const std::string p = fmt::format("{}[{}]", path, n);
    ObjectReader r(list[n], p);
    Entry e;
    e.name = r.string("name", fmt::format("SAT{:02d}", n + 1));
    const std::string l1 = r.string("line1");
    const std::string l2 = r.string("line2");
    r.finish();
    try {
      e.elements = parse_tle(l1, l2);
    } catch (const std::invalid_argument& ex) {
      throw ScenarioError(p + ": " + ex.what());
    }
    entries.push_back(std::move(e));
  }
  if (entries.size() < 2) throw ScenarioError(path + ": need at least 2 element sets");

  // The propagation frame coincides with ECEF at the constellation epoch.
  const double gmst = gmst_deg(c.epoch);
  const TleElements& first = entries.front().elements;
  const bool equatorial = first.inclination_deg < 1e-3;
  double radius = 0.0;
  for (auto& e : entries) {
    const TleElements& el = e.elements;
    const double dt = seconds_between(el.epoch, c.epoch);
    double u = el.arg_perigee_deg + el.mean_anomaly_deg + rad2deg(el.mean_motion_rad_s() * dt);
    if (equatorial) u += el.raan_deg - gmst;
    e.phase = wrap360(u);
    radius += el.semi_major_axis_km();
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.phase < b.phase; });

  c.satellite_count = static_cast<int>(entries.size());
  c.altitude_km = radius / static_cast<double>(entries.size()) - constants::kEarthRadiusKm;
  c.inclination_deg = equatorial ? 0.0 : first.inclination_deg;
  c.raan_deg = equatorial ? 0.0 : wrap360(first.raan_deg - gmst);
  c.names.clear();
  c.phase_offsets_deg.clear();
  for (const auto& e : entries) {
    c.names.push_back(e.name);
    c.phase_offsets_deg.push_back(e.phase);
  }
}

ConstellationSpec read_constellation(const json& node) {
  ObjectReader r(node, "$.constellation");
  ConstellationSpec c;
  c.epoch = r.timestamp("epoch");
  if (r.has("tle")) {
    const json& list = r.array("tle");
    read_tle_constellation(list, r.child("tle"), c);
    for (const char* key : {"satellite_count", "altitude_km", "phase_offsets_deg", "satellite_names"}) {
      if (r.has(key)) throw ScenarioError(r.child(key) + ": not allowed together with tle");
    }
    r.finish();
    c.validate();
    return c;
  }
  c.satellite_count = static_cast<int>(r.integer("satellite_count"));
  c.altitude_km = r.number("altitude_km");
  c.inclination_deg = r.number("inclination_deg", 0.0);
  c.raan_deg = r.number("raan_deg", 0.0);
  if (r.has("phase_offsets_deg")) {
    const json& list = r.array("phase_offsets_deg");
    for (std::size_t k = 0; k < list.size(); ++k) {
      if (!list[k].is_number()) {
        throw ScenarioError(fmt::format("{}[{}]: expected a number", r.child("phase_offsets_deg"), k));
      }
      c.phase_offsets_deg.push_back(list[k].get<double>());
    }
  } else if (c.satellite_count > 0) {
    for (int k = 0; k < c.satellite_count; ++k) c.phase_offsets_deg.push_back(360.0 * k / c.satellite_count);
  }
  if (r.has("satellite_names")) {
    const json& list = r.array("satellite_names");
    for (std::size_t k = 0; k < list.size(); ++k) {
      if (!list[k].is_string()) {
        throw ScenarioError(fmt::format("{}[{}]: expected a string", r.child("satellite_names"), k));
      }
      c.names.push_back(list[k].get<std::string>());
    }
  }
  r.finish();
  c.validate();
  return c;
}

GroundStationSpec read_station(const json& node, const std::string& path) {
  ObjectReader r(node, path);
  GroundStationSpec gs;
  gs.id = r.string("id");
  gs.latitude_deg = r.number("latitude_deg");
  gs.longitude_deg = r.number("longitude_deg");
  gs.altitude_m = r.number("altitude_m", 0.0);
  gs.min_elevation_deg = r.number("min_elevation_deg", 5.0);
  r.finish();
  gs.validate(path);
  return gs;
}

FeederLinkParams read_feeder(const json& node) {
  const std::string path = "$.feeder_link";
  ObjectReader r(node, path);
  FeederLinkParams d;
  FeederLinkParams p;
  p.carrier_frequency_hz = r.number("carrier_frequency_hz", d.carrier_frequency_hz);
  p.bandwidth_hz = r.number("bandwidth_hz", d.bandwidth_hz);
  p.eirp_dbw = r.number("eirp_dbw", d.eirp_dbw);
  p.rx_gt_dbk = r.number("rx_gt_dbk", d.rx_gt_dbk);
  p.shadowing_loss_db = r.number("shadowing_loss_db", d.shadowing_loss_db);
  p.gs_antenna_diameter_m = r.number("gs_antenna_diameter_m", d.gs_antenna_diameter_m);
  p.system_noise_temp_k = r.number("system_noise_temp_k", d.system_noise_temp_k);
  p.beam_rolloff_3db_deg = r.nullable_number("beam_rolloff_3db_deg", d.beam_rolloff_3db_deg);
  r.finish();
  p.validate(path);
  return p;
}

RainModelParams read_rain_model(const json& node) {
  const std::string path = "$.rain_model";
  ObjectReader r(node, path);
  RainModelParams d;
  RainModelParams p;
  p.coeff_a = r.number("coeff_a", d.coeff_a);
  p.coeff_b = r.number("coeff_b", d.coeff_b);
  p.rain_height_km = r.number("rain_height_km", d.rain_height_km);
  p.reduction_length_km = r.number("reduction_length_km", d.reduction_length_km);
  p.reduction_exponent = r.number("reduction_exponent", d.reduction_exponent);
  r.finish();
  p.validate(path);
  return p;
}

IslParams read_isl(const json& node) {
  const std::string path = "$.isl";
  ObjectReader r(node, path);
  IslParams d;
  IslParams p;
  p.wavelength_m = r.number("wavelength_m", d.wavelength_m);
  p.tx_power_w = r.number("tx_power_w", d.tx_power_w);
  p.tx_efficiency = r.number("tx_efficiency", d.tx_efficiency);
  p.rx_efficiency = r.number("rx_efficiency", d.rx_efficiency);
  p.rx_telescope_diameter_m = r.number("rx_telescope_diameter_m", d.rx_telescope_diameter_m);
  p.tx_pointing_error_rad = r.number("tx_pointing_error_rad", d.tx_pointing_error_rad);
  p.rx_pointing_error_rad = r.number("rx_pointing_error_rad", d.rx_pointing_error_rad);
  p.divergence_full_angle_rad = r.number("divergence_full_angle_rad", d.divergence_full_angle_rad);
  p.rx_sensitivity_dbm = r.number("rx_sensitivity_dbm", d.rx_sensitivity_dbm);
  p.noise_power_w = r.nullable_number("noise_power_w", d.noise_power_w);
  p.bandwidth_hz = r.nullable_number("bandwidth_hz", d.bandwidth_hz);
  p.fixed_capacity_bps = r.nullable_number("fixed_capacity_bps", d.fixed_capacity_bps);
  p.sat_gt_isl_dbk = r.number("sat_gt_isl_dbk", d.sat_gt_isl_dbk);
  r.finish();
  p.validate(path);
  return p;
}

RainEvent read_rain_event(const json& node, const std::string& path) {
  ObjectReader r(node, path);
  RainEvent e;
  e.gs_id = r.string("gs");
  e.start = r.timestamp("start");
  e.end = r.timestamp("end");
  e.rain_rate_mmh = r.number("rain_rate_mmh");
  e.label = r.string("label", "");
  r.finish();
  e.validate(path);
  return e;
}

TimeGrid read_time(const json& node) {
  ObjectReader r(node, "$.time");
  TimeGrid t;
  t.start = r.timestamp("start");
  t.duration_s = r.integer("duration_s", 86400);
  t.slot_s = r.integer("slot_s", 300);
  r.finish();
  return t;
}

Policies read_policies(const json& node) {
  ObjectReader r(node, "$.policies");
  Policies p;
  if (r.has("serving_gs")) {
    try {
      p.serving_gs = parse_serving_policy(r.string("serving_gs"));
    } catch (const std::invalid_argument& e) {
      throw ScenarioError(r.child("serving_gs") + ": " + e.what());
    }
  }
  p.lexicographic = r.boolean("lexicographic", p.lexicographic);
  p.isl_enabled = r.boolean("isl_enabled", p.isl_enabled);
  p.distinct_relay_destination = r.boolean("distinct_relay_destination", p.distinct_relay_destination);
  r.finish();
  return p;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

void Scenario::validate() const {
  constellation.validate();
  if (ground_stations.empty()) throw ScenarioError("$.ground_stations: need at least one ground station");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < ground_stations.size(); ++i) {
    const std::string path = fmt::format("$.ground_stations[{}]", i);
    ground_stations[i].validate(path);
    if (!ids.insert(ground_stations[i].id).second) throw ScenarioError(path + ".id: duplicate station id");
  }
  links.feeder.validate("$.feeder_link");
  links.rain.validate("$.rain_model");
  links.isl.validate("$.isl");
  for (std::size_t n = 0; n < rain_events.size(); ++n) {
    const std::string path = fmt::format("$.rain_events[{}]", n);
    rain_events[n].validate(path);
    if (station_index(rain_events[n].gs_id) < 0) {
      throw ScenarioError(path + ".gs: unknown ground station '" + rain_events[n].gs_id + "'");
    }
  }
  if (time.slot_s <= 0) throw ScenarioError("$.time.slot_s: must be > 0");
  if (time.duration_s <= 0) throw ScenarioError("$.time.duration_s: must be > 0");
  if (time.duration_s % time.slot_s != 0) throw ScenarioError("$.time.duration_s: must be a multiple of slot_s");
  if (time.start < constellation.epoch) throw ScenarioError("$.time.start: must not precede the constellation epoch");
}

int Scenario::station_index(std::string_view id) const {
  for (std::size_t i = 0; i < ground_stations.size(); ++i) {
    if (ground_stations[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

Scenario parse_scenario(const json& doc) {
  ObjectReader r(doc, "$");
  Scenario s;
  s.name = r.string("name", "");
  s.description = r.string("description", "");
  s.constellation = read_constellation(r.at("constellation"));
  const json& stations = r.array("ground_stations");
  for (std::size_t i = 0; i < stations.size(); ++i) {
    s.ground_stations.push_back(read_station(stations[i], fmt::format("$.ground_stations[{}]", i)));
  }
  if (r.has("feeder_link")) s.links.feeder = read_feeder(r.at("feeder_link"));
  if (r.has("rain_model")) s.links.rain = read_rain_model(r.at("rain_model"));
  if (r.has("isl")) s.links.isl = read_isl(r.at("isl"));
  if (r.has("rain_events")) {
    const json& events = r.array("rain_events");
    for (std::size_t n = 0; n < events.size(); ++n) {
      s.rain_events.push_back(read_rain_event(events[n], fmt::format("$.rain_events[{}]", n)));
    }
  }
  s.time = read_time(r.at("time"));
  if (r.has("policies")) s.policies = read_policies(r.at("policies"));
  r.finish();
  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path.string() + ": cannot open scenario file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioError(path.string() + ": invalid JSON: " + e.what());
  }
  return parse_scenario(doc);
}

json scenario_to_json(const Scenario& s) {
  json doc;
  doc["name"] = s.name;
  doc["description"] = s.description;
  const auto& c = s.constellation;
  doc["constellation"] = {{"epoch", format_timestamp(c.epoch)},
                          {"satellite_count", c.satellite_count},
                          {"satellite_names", c.names},
                          {"altitude_km", c.altitude_km},
                          {"inclination_deg", c.inclination_deg},
                          {"raan_deg", c.raan_deg},
                          {"phase_offsets_deg", c.phase_offsets_deg}};
  json stations = json::array();
  for (const auto& gs : s.ground_stations) {
    stations.push_back({{"id", gs.id},
                        {"latitude_deg", gs.latitude_deg},
                        {"longitude_deg", gs.longitude_deg},
                        {"altitude_m", gs.altitude_m},
                        {"min_elevation_deg", gs.min_elevation_deg}});
  }
  doc["ground_stations"] = stations;
  const auto& f = s.links.feeder;
  doc["feeder_link"] = {{"carrier_frequency_hz", f.carrier_frequency_hz},
                        {"bandwidth_hz", f.bandwidth_hz},
                        {"eirp_dbw", f.eirp_dbw},
                        {"rx_gt_dbk", f.rx_gt_dbk},
                        {"shadowing_loss_db", f.shadowing_loss_db},
                        {"gs_antenna_diameter_m", f.gs_antenna_diameter_m},
                        {"system_noise_temp_k", f.system_noise_temp_k},
                        {"beam_rolloff_3db_deg", optional_json(f.beam_rolloff_3db_deg)}};
  const auto& rm = s.links.rain;
  doc["rain_model"] = {{"coeff_a", rm.coeff_a},
                       {"coeff_b", rm.coeff_b},
                       {"rain_height_km", rm.rain_height_km},
                       {"reduction_length_km", rm.reduction_length_km},
                       {"reduction_exponent", rm.reduction_exponent}};
  const auto& i = s.links.isl;
  doc["isl"] = {{"wavelength_m", i.wavelength_m},
                {"tx_power_w", i.tx_power_w},
                {"tx_efficiency", i.tx_efficiency},
                {"rx_efficiency", i.rx_efficiency},
                {"rx_telescope_diameter_m", i.rx_telescope_diameter_m},
                {"tx_pointing_error_rad", i.tx_pointing_error_rad},
                {"rx_pointing_error_rad", i.rx_pointing_error_rad},
                {"divergence_full_angle_rad", i.divergence_full_angle_rad},
                {"rx_sensitivity_dbm", i.rx_sensitivity_dbm},
                {"noise_power_w", optional_json(i.noise_power_w)},
                {"bandwidth_hz", optional_json(i.bandwidth_hz)},
                {"fixed_capacity_bps", optional_json(i.fixed_capacity_bps)},
                {"sat_gt_isl_dbk", i.sat_gt_isl_dbk}};
  json events = json::array();
  for (const auto& e : s.rain_events) {
    events.push_back({{"gs", e.gs_id},
                      {"start", format_timestamp(e.start)},
                      {"end", format_timestamp(e.end)},
                      {"rain_rate_mmh", e.rain_rate_mmh},
                      {"label", e.label}});
  }
  doc["rain_events"] = events;
  doc["time"] = {{"start", format_timestamp(s.time.start)},
                 {"duration_s", s.time.duration_s},
                 {"slot_s", s.time.slot_s}};
  doc["policies"] = {{"serving_gs", std::string(to_string(s.policies.serving_gs))},
                     {"lexicographic", s.policies.lexicographic},
                     {"isl_enabled", s.policies.isl_enabled},
                     {"distinct_relay_destination", s.policies.distinct_relay_destination}};
  return doc;
}

}  // namespace meolb
