#include "meolb/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "meolb/core.hpp"

namespace meolb {

namespace {

void require_positive(double v, const std::string& path) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ScenarioError(path + ": must be finite and > 0");
}

}  // namespace

double FeederLinkParams::wavelength_m() const { return constants::kSpeedOfLight / carrier_frequency_hz; }

void FeederLinkParams::validate(const std::string& path) const {
  require_positive(carrier_frequency_hz, path + ".carrier_frequency_hz");
  require_positive(bandwidth_hz, path + ".bandwidth_hz");
  require_positive(gs_antenna_diameter_m, path + ".gs_antenna_diameter_m");
  require_positive(system_noise_temp_k, path + ".system_noise_temp_k");
  if (!(shadowing_loss_db >= 0.0)) throw ScenarioError(path + ".shadowing_loss_db: must be >= 0");
  if (!std::isfinite(eirp_dbw)) throw ScenarioError(path + ".eirp_dbw: must be finite");
  if (!std::isfinite(rx_gt_dbk)) throw ScenarioError(path + ".rx_gt_dbk: must be finite");
  if (beam_rolloff_3db_deg) require_positive(*beam_rolloff_3db_deg, path + ".beam_rolloff_3db_deg");
}

void RainModelParams::validate(const std::string& path) const {
  require_positive(coeff_a, path + ".coeff_a");
  require_positive(coeff_b, path + ".coeff_b");
  require_positive(rain_height_km, path + ".rain_height_km");
  require_positive(reduction_length_km, path + ".reduction_length_km");
  if (!(reduction_exponent >= 0.0)) throw ScenarioError(path + ".reduction_exponent: must be >= 0");
}

void RainEvent::validate(const std::string& path) const {
  if (gs_id.empty()) throw ScenarioError(path + ".gs: must be non-empty");
  if (!(start < end)) throw ScenarioError(path + ": start must precede end");
  if (!(rain_rate_mmh >= 0.0)) throw ScenarioError(path + ".rain_rate_mmh: must be >= 0");
}

void IslParams::validate(const std::string& path) const {
  require_positive(wavelength_m, path + ".wavelength_m");
  require_positive(tx_power_w, path + ".tx_power_w");
  require_positive(rx_telescope_diameter_m, path + ".rx_telescope_diameter_m");
  require_positive(divergence_full_angle_rad, path + ".divergence_full_angle_rad");
  if (!(tx_efficiency > 0.0 && tx_efficiency <= 1.0)) {
    throw ScenarioError(path + ".tx_efficiency: must lie in (0, 1]");
  }
  if (!(rx_efficiency > 0.0 && rx_efficiency <= 1.0)) {
    throw ScenarioError(path + ".rx_efficiency: must lie in (0, 1]");
  }
  if (!(tx_pointing_error_rad >= 0.0)) throw ScenarioError(path + ".tx_pointing_error_rad: must be >= 0");
  if (!(rx_pointing_error_rad >= 0.0)) throw ScenarioError(path + ".rx_pointing_error_rad: must be >= 0");
  if (!std::isfinite(rx_sensitivity_dbm)) throw ScenarioError(path + ".rx_sensitivity_dbm: must be finite");
  if (fixed_capacity_bps) {
    require_positive(*fixed_capacity_bps, path + ".fixed_capacity_bps");
  } else {
    if (!noise_power_w) throw ScenarioError(path + ".noise_power_w: required when fixed_capacity_bps is null");
    if (!bandwidth_hz) throw ScenarioError(path + ".bandwidth_hz: required when fixed_capacity_bps is null");
  }
  if (noise_power_w) require_positive(*noise_power_w, path + ".noise_power_w");
  if (bandwidth_hz) require_positive(*bandwidth_hz, path + ".bandwidth_hz");
}

namespace channel {

double specific_attenuation(double rain_rate_mmh, const RainModelParams& params) {
  if (rain_rate_mmh < 0.0) throw std::invalid_argument("rain rate must be >= 0");
  return params.coeff_a * std::pow(rain_rate_mmh, params.coeff_b);
}

double effective_rain_path_km(double elevation_deg, double rain_rate_mmh, const RainModelParams& params,
                              double station_altitude_km) {
  if (!(elevation_deg > 0.0)) {
    throw std::invalid_argument("rain slant path undefined for elevation <= 0");
  }
  const double depth = params.rain_height_km - station_altitude_km;
  if (depth <= 0.0) return 0.0;
  const double el = deg2rad(elevation_deg);
  const double slant = depth / std::sin(el);
  const double horizontal = slant * std::cos(el);
  const double scale = params.reduction_length_km * std::exp(-params.reduction_exponent * rain_rate_mmh);
  // Near zenith the reduced slant would drop below the layer depth; the path never does.
  return std::max(slant / (1.0 + horizontal / scale), depth);
}

double rain_attenuation(double elevation_deg, double rain_rate_mmh, const RainModelParams& params,
                        double station_altitude_km) {
  if (rain_rate_mmh < 0.0) throw std::invalid_argument("rain rate must be >= 0");
  const double path = effective_rain_path_km(elevation_deg, rain_rate_mmh, params, station_altitude_km);
  return path * specific_attenuation(rain_rate_mmh, params);
}

double free_space_path_loss_db(double distance_km, double frequency_hz) {
  const double wavelength = constants::kSpeedOfLight / frequency_hz;
  return 20.0 * std::log10(4.0 * constants::kPi * distance_km * 1e3 / wavelength);
}

double beam_rolloff_loss_db(double off_axis_deg, const FeederLinkParams& params) {
  if (!params.beam_rolloff_3db_deg) return 0.0;
  const double ratio = off_axis_deg / *params.beam_rolloff_3db_deg;
  return 12.0 * ratio * ratio;
}

double fl_cnr_db(const FeederLinkConditions& link, const FeederLinkParams& params,
                 const RainModelParams& rain) {
  if (!(link.distance_km > 0.0)) throw std::invalid_argument("feeder-link distance must be > 0");
  const double rain_db =
      link.rain_rate_mmh > 0.0
          ? rain_attenuation(link.elevation_deg, link.rain_rate_mmh, rain, link.station_altitude_km)
          : 0.0;
  return params.eirp_dbw - beam_rolloff_loss_db(link.off_axis_deg, params) -
         free_space_path_loss_db(link.distance_km, params.carrier_frequency_hz) - params.shadowing_loss_db -
         rain_db + params.rx_gt_dbk - to_db(constants::kBoltzmann) - to_db(params.bandwidth_hz);
}

double fl_cnr_db(double distance_km, double elevation_deg, double rain_rate_mmh,
                 const FeederLinkParams& params, const RainModelParams& rain) {
  return fl_cnr_db(FeederLinkConditions{distance_km, elevation_deg, rain_rate_mmh, 0.0, 0.0}, params, rain);
}

double shannon_capacity(double cnr_linear, double bandwidth_hz) {
  if (!(cnr_linear >= 0.0)) throw std::invalid_argument("CNR must be >= 0");
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("bandwidth must be > 0");
  return bandwidth_hz * std::log2(1.0 + cnr_linear);
}

double fl_capacity_bps(const FeederLinkConditions& link, const FeederLinkParams& params,
                       const RainModelParams& rain) {
  return shannon_capacity(from_db(fl_cnr_db(link, params, rain)), params.bandwidth_hz);
}

double optical_tx_gain(double divergence_full_angle_rad) {
  return 16.0 / (divergence_full_angle_rad * divergence_full_angle_rad);
}

double optical_rx_gain(double telescope_diameter_m, double wavelength_m) {
  const double x = telescope_diameter_m * constants::kPi / wavelength_m;
  return x * x;
}

double pointing_loss(double gain, double pointing_error_rad) {
  return std::exp(-gain * pointing_error_rad * pointing_error_rad);
}

double optical_path_loss(double wavelength_m, double distance_km) {
  const double x = wavelength_m / (4.0 * constants::kPi * distance_km * 1e3);
  return x * x;
}

IslBudget isl_budget(double distance_km, const IslParams& params) {
  if (!(distance_km > 0.0)) throw std::invalid_argument("ISL distance must be > 0");
  IslBudget b;
  b.tx_gain = optical_tx_gain(params.divergence_full_angle_rad);
  b.rx_gain = optical_rx_gain(params.rx_telescope_diameter_m, params.wavelength_m);
  b.tx_pointing_loss = pointing_loss(b.tx_gain, params.tx_pointing_error_rad);
  b.rx_pointing_loss = pointing_loss(b.rx_gain, params.rx_pointing_error_rad);
  b.path_loss = optical_path_loss(params.wavelength_m, distance_km);
  b.received_power_w = params.tx_power_w * params.tx_efficiency * params.rx_efficiency * b.tx_gain *
                       b.rx_gain * b.tx_pointing_loss * b.rx_pointing_loss * b.path_loss;
  return b;
}

double isl_received_power(double distance_km, const IslParams& params) {
  return isl_budget(distance_km, params).received_power_w;
}

double isl_capacity(double distance_km, const IslParams& params) {
  if (params.fixed_capacity_bps) return *params.fixed_capacity_bps;
  const double received = isl_received_power(distance_km, params);
  if (received < dbm_to_watt(params.rx_sensitivity_dbm)) return 0.0;
  if (!params.noise_power_w || !params.bandwidth_hz) {
    throw std::invalid_argument("ISL physical budget needs noise_power_w and bandwidth_hz");
  }
  return shannon_capacity(received / *params.noise_power_w, *params.bandwidth_hz);
}

}  // namespace channel
}  // namespace meolb
