#include "meolb/plots.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <set>
#include <tuple>

#include "meolb/channel.hpp"
#include "meolb/svg.hpp"

namespace meolb {

namespace {

constexpr const char* kBaselineColor = "#d9534f";
constexpr const char* kIslColor = "#1f5fbf";
constexpr const char* kCurveColors[] = {"#1f5fbf", "#e08a00", "#2e9d4f", "#8e44ad", "#555555"};

std::vector<svg::Band> rain_bands(const Scenario* scenario, TimePoint origin) {
  std::vector<svg::Band> bands;
  if (scenario == nullptr) return bands;
  for (const RainEvent& e : scenario->rain_events) {
    svg::Band b;
    b.x0 = seconds_between(origin, e.start) / 3600.0;
    b.x1 = seconds_between(origin, e.end) / 3600.0;
    b.label = e.label.empty() ? e.gs_id : fmt::format("{} ({})", e.gs_id, e.label);
    bands.push_back(std::move(b));
  }
  return bands;
}

std::vector<double> valid_values(const Grid<double>& g, std::size_t k, const std::vector<int>& skip) {
  const std::set<int> s(skip.begin(), skip.end());
  std::vector<double> out;
  for (std::size_t n = 0; n < g.cols(); ++n) {
    if (!s.contains(static_cast<int>(n))) out.push_back(g(k, n));
  }
  return out;
}

std::vector<double> row(const Grid<double>& g, std::size_t k) {
  std::vector<double> out(g.cols());
  for (std::size_t n = 0; n < g.cols(); ++n) out[n] = g(k, n);
  return out;
}

std::string timeseries(const std::vector<std::string>& names, const std::vector<std::string>& times,
                       const std::vector<std::pair<std::string, const Grid<double>*>>& arms,
                       const Scenario* scenario) {
  svg::LineChart chart;
  chart.title = "Per-satellite download rate";
  chart.x_label = "hours since start";
  chart.y_label = "rate (bit/s)";
  const std::vector<double> hours = hours_axis(times);
  const TimePoint origin = times.empty() ? TimePoint{} : parse_timestamp(times.front());
  const auto bands = rain_bands(scenario, origin);
  for (std::size_t k = 0; k < names.size(); ++k) {
    svg::Panel p;
    p.title = names[k];
    p.bands = bands;
    for (std::size_t a = 0; a < arms.size(); ++a) {
      svg::Series s;
      s.label = arms[a].first;
      s.color = a == 0 && arms.size() > 1 ? kBaselineColor : kIslColor;
      s.x = hours;
      s.y = row(*arms[a].second, k);
      p.series.push_back(std::move(s));
    }
    chart.panels.push_back(std::move(p));
  }
  return svg::render(chart);
}

}  // namespace

std::vector<RainClass> rain_classes(const Scenario& scenario) {
  std::vector<RainClass> out;
  std::set<std::tuple<std::string, std::string, double>> seen;
  for (const RainEvent& e : scenario.rain_events) {
    if (!seen.insert({e.label, e.gs_id, e.rain_rate_mmh}).second) continue;
    RainClass c;
    c.label = e.label.empty() ? e.gs_id : e.label;
    c.gs_id = e.gs_id;
    c.rain_rate_mmh = e.rain_rate_mmh;
    const int i = scenario.station_index(e.gs_id);
    if (i >= 0) c.station_altitude_km = scenario.ground_stations[static_cast<std::size_t>(i)].altitude_m / 1000.0;
    out.push_back(std::move(c));
  }
  return out;
}

RainCurve rain_curve(const RainClass& rain_class, const RainModelParams& params, double from_deg, double to_deg) {
  RainCurve curve;
  curve.rain_class = rain_class;
  for (double el = from_deg; el <= to_deg + 1e-9; el += 1.0) {
    curve.elevation_deg.push_back(el);
    curve.attenuation_db.push_back(
        channel::rain_attenuation(el, rain_class.rain_rate_mmh, params, rain_class.station_altitude_km));
  }
  return curve;
}

std::string rain_attenuation_svg(const std::vector<RainCurve>& curves) {
  svg::LineChart chart;
  chart.title = "Rain attenuation versus elevation";
  chart.x_label = "elevation (deg)";
  chart.y_label = "attenuation (dB)";
  chart.panel_height = 360.0;
  chart.width = 760.0;
  svg::Panel p;
  for (std::size_t n = 0; n < curves.size(); ++n) {
    const RainCurve& c = curves[n];
    svg::Series s;
    s.label = fmt::format("{} {:g} mm/h", c.rain_class.label, c.rain_class.rain_rate_mmh);
    s.color = kCurveColors[std::min<std::size_t>(n, std::size(kCurveColors) - 1)];
    s.x = c.elevation_deg;
    s.y = c.attenuation_db;
    p.series.push_back(std::move(s));
  }
  chart.panels.push_back(std::move(p));
  return svg::render(chart);
}

std::vector<double> hours_axis(const std::vector<std::string>& times) {
  std::vector<double> out;
  if (times.empty()) return out;
  const TimePoint origin = parse_timestamp(times.front());
  for (const std::string& t : times) out.push_back(seconds_between(origin, parse_timestamp(t)) / 3600.0);
  return out;
}

std::string timeseries_svg(const CombinedTable& table, const Scenario* scenario) {
  return timeseries(table.satellite_names, table.times,
                    {{"without ISL", &table.baseline}, {"with ISL", &table.treatment}}, scenario);
}

std::string timeseries_svg(const SeriesTable& table, const Scenario* scenario) {
  return timeseries(table.satellite_names, table.times, {{"rate", &table.series}}, scenario);
}

std::vector<std::string> histogram_svgs(const CombinedTable& table, double bin_width_bps) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < table.satellite_names.size(); ++k) {
    svg::HistogramChart chart;
    chart.title = table.satellite_names[k] + " throughput distribution";
    chart.x_label = "rate (bit/s)";
    chart.bin_width = bin_width_bps;
    chart.sets.push_back({"without ISL", kBaselineColor, valid_values(table.baseline, k, table.baseline_degenerate)});
    chart.sets.push_back({"with ISL", kIslColor, valid_values(table.treatment, k, table.treatment_degenerate)});
    out.push_back(svg::render(chart));
  }
  return out;
}

std::vector<std::string> histogram_svgs(const SeriesTable& table, double bin_width_bps) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < table.satellite_names.size(); ++k) {
    svg::HistogramChart chart;
    chart.title = table.satellite_names[k] + " throughput distribution";
    chart.x_label = "rate (bit/s)";
    chart.bin_width = bin_width_bps;
    chart.sets.push_back({"rate", kIslColor, valid_values(table.series, k, table.degenerate_slots)});
    out.push_back(svg::render(chart));
  }
  return out;
}

}  // namespace meolb
