#pragma once

#include <optional>
#include <string>

#include "meolb/timeutil.hpp"

namespace meolb {

/// Ka-band downlink budget. Antenna gains are folded into EIRP and G/T because the
/// ground antenna tracks the satellite and the satellite beam points at its gateway.
struct FeederLinkParams {
  double carrier_frequency_hz = 20e9;
  double bandwidth_hz = 100e6;
  double eirp_dbw = 49.7;
  double rx_gt_dbk = 7.0;
  double shadowing_loss_db = 0.0;
  double gs_antenna_diameter_m = 4.5;
  double system_noise_temp_k = 150.0;
  /// When set, g(phi) = -12 (phi / phi_3dB)^2 dB is applied to the off-nadir angle.
  std::optional<double> beam_rolloff_3db_deg;

  double wavelength_m() const;
  void validate(const std::string& path) const;
  bool operator==(const FeederLinkParams&) const = default;
};

struct RainModelParams {
  double coeff_a = 0.09164;
  double coeff_b = 1.0568;
  double rain_height_km = 3.0;
  double reduction_length_km = 35.0;
  double reduction_exponent = 0.015;

  void validate(const std::string& path) const;
  bool operator==(const RainModelParams&) const = default;
};

struct RainEvent {
  std::string gs_id;
  TimePoint start{};
  TimePoint end{};
  double rain_rate_mmh = 0.0;
  std::string label;  // e.g. "heavy", used for plot legends

  void validate(const std::string& path) const;
  bool covers(TimePoint t) const { return t >= start && t < end; }
  bool operator==(const RainEvent&) const = default;
};

struct IslParams {
  double wavelength_m = 1550e-9;
  double tx_power_w = 5.0;
  double tx_efficiency = 0.8;
  double rx_efficiency = 0.8;
  double rx_telescope_diameter_m = 0.08;
  double tx_pointing_error_rad = 1e-6;
  double rx_pointing_error_rad = 1e-6;
  double divergence_full_angle_rad = 15e-6;
  double rx_sensitivity_dbm = -35.5;
  std::optional<double> noise_power_w;
  std::optional<double> bandwidth_hz;
  std::optional<double> fixed_capacity_bps = 600e6;
  double sat_gt_isl_dbk = 12.0;  // recorded only; the optical budget uses noise_power_w

  void validate(const std::string& path) const;
  bool operator==(const IslParams&) const = default;
};

namespace channel {

/// gamma = a * rho^b, dB/km.
double specific_attenuation(double rain_rate_mmh, const RainModelParams& params);

/// Slant path below the rain layer times the horizontal reduction factor, km,
/// never shorter than the vertical depth of the layer.
double effective_rain_path_km(double elevation_deg, double rain_rate_mmh, const RainModelParams& params,
                              double station_altitude_km = 0.0);

/// L_rain = d_eff * gamma (dB). Throws std::invalid_argument for elevation <= 0 or rho < 0.
double rain_attenuation(double elevation_deg, double rain_rate_mmh, const RainModelParams& params,
                        double station_altitude_km = 0.0);

double free_space_path_loss_db(double distance_km, double frequency_hz);

/// Satellite beam roll-off loss (dB, >= 0); zero unless the pattern is enabled.
double beam_rolloff_loss_db(double off_axis_deg, const FeederLinkParams& params);

struct FeederLinkConditions {
  double distance_km = 0.0;
  double elevation_deg = 90.0;
  double rain_rate_mmh = 0.0;
  double station_altitude_km = 0.0;
  double off_axis_deg = 0.0;
};

double fl_cnr_db(const FeederLinkConditions& link, const FeederLinkParams& params,
                 const RainModelParams& rain);

double fl_cnr_db(double distance_km, double elevation_deg, double rain_rate_mmh,
                 const FeederLinkParams& params, const RainModelParams& rain);

/// B log2(1 + gamma). Throws std::invalid_argument if cnr < 0 or bandwidth <= 0.
double shannon_capacity(double cnr_linear, double bandwidth_hz);

double fl_capacity_bps(const FeederLinkConditions& link, const FeederLinkParams& params,
                       const RainModelParams& rain);

/// Individual factors of the optical budget, all linear.
struct IslBudget {
  double tx_gain = 0.0;
  double rx_gain = 0.0;
  double tx_pointing_loss = 0.0;
  double rx_pointing_loss = 0.0;
  double path_loss = 0.0;
  double received_power_w = 0.0;
};

double optical_tx_gain(double divergence_full_angle_rad);
double optical_rx_gain(double telescope_diameter_m, double wavelength_m);
double pointing_loss(double gain, double pointing_error_rad);
double optical_path_loss(double wavelength_m, double distance_km);

IslBudget isl_budget(double distance_km, const IslParams& params);
double isl_received_power(double distance_km, const IslParams& params);

/// Override passthrough, else Shannon on the optical budget; 0 below receiver sensitivity.
double isl_capacity(double distance_km, const IslParams& params);

}  // namespace channel
}  // namespace meolb
