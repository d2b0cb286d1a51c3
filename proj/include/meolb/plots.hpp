#pragma once

#include <string>
#include <vector>

#include "meolb/report.hpp"
#include "meolb/scenario.hpp"

namespace meolb {

/// One rain class of the attenuation figure, taken from the scenario's rain events.
struct RainClass {
  std::string label;
  std::string gs_id;
  double rain_rate_mmh = 0.0;
  double station_altitude_km = 0.0;
};

struct RainCurve {
  RainClass rain_class;
  std::vector<double> elevation_deg;
  std::vector<double> attenuation_db;
};

/// Distinct (label, station, rate) triples in event order.
std::vector<RainClass> rain_classes(const Scenario& scenario);

/// Attenuation on a 1° grid over [from_deg, to_deg].
RainCurve rain_curve(const RainClass& rain_class, const RainModelParams& params, double from_deg = 5.0,
                     double to_deg = 90.0);

std::string rain_attenuation_svg(const std::vector<RainCurve>& curves);

/// Hours since the first slot for each time label.
std::vector<double> hours_axis(const std::vector<std::string>& times);

/// One panel per satellite; `scenario` (optional) supplies the shaded rain windows.
std::string timeseries_svg(const CombinedTable& table, const Scenario* scenario);
std::string timeseries_svg(const SeriesTable& table, const Scenario* scenario);

/// One chart per satellite: baseline and ISL histograms (or the single arm).
std::vector<std::string> histogram_svgs(const CombinedTable& table, double bin_width_bps = 5e6);
std::vector<std::string> histogram_svgs(const SeriesTable& table, double bin_width_bps = 5e6);

}  // namespace meolb
