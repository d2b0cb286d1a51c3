#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "meolb/channel.hpp"
#include "meolb/core.hpp"
#include "support/link_oracle.hpp"

using namespace meolb;
using namespace meolb::channel;

TEST_CASE("specific attenuation") {
  const RainModelParams p;
  CHECK(specific_attenuation(0.0, p) == 0.0);
  CHECK(specific_attenuation(1.0, p) == doctest::Approx(0.09164));
  CHECK(specific_attenuation(50.0, p) == doctest::Approx(0.09164 * std::pow(50.0, 1.0568)));
  CHECK(specific_attenuation(50.0, p) == doctest::Approx(5.72).epsilon(2e-3));
}

TEST_CASE("rain attenuation") {
  const RainModelParams p;
  CHECK(rain_attenuation(30.0, 0.0, p) == 0.0);
  CHECK_THROWS_AS(rain_attenuation(0.0, 10.0, p), std::invalid_argument);
  CHECK_THROWS_AS(rain_attenuation(-3.0, 10.0, p), std::invalid_argument);

  // independent evaluation of the flat-layer path: 3 km layer, station at 0.52 km, 40 deg
  const double el = deg2rad(40.0);
  const double ls = (3.0 - 0.52) / std::sin(el);
  const double lg = ls * std::cos(el);
  const double deff = ls / (1.0 + lg / (35.0 * std::exp(-0.015 * 13.9)));
  CHECK(rain_attenuation(40.0, 13.9, p, 0.52) == doctest::Approx(deff * 0.09164 * std::pow(13.9, 1.0568)));

  for (double rho : {3.79, 7.16, 13.9, 40.0}) {
    double prev = rain_attenuation(5.0, rho, p);
    for (double e = 6.0; e <= 90.0; e += 1.0) {
      const double a = rain_attenuation(e, rho, p);
      CHECK(a <= prev + 1e-12);
      prev = a;
    }
  }
}

TEST_CASE("free-space path loss against the textbook constant") {
  const double ref = oracle::fspl_db_textbook(8000.0, 20.0);
  CHECK(free_space_path_loss_db(8000.0, 20e9) == doctest::Approx(ref).epsilon(1e-4));
  CHECK(free_space_path_loss_db(8000.0, 20e9) == doctest::Approx(196.53).epsilon(1e-4));
}

TEST_CASE("feeder-link CNR") {
  const FeederLinkParams fl;
  const RainModelParams rain;
  const double fspl = free_space_path_loss_db(8000.0, 20e9);
  const double ref = oracle::cnr_spreadsheet_db(49.7, fspl, 0.0, 7.0, 100e6);
  const double cnr = fl_cnr_db(8000.0, 90.0, 0.0, fl, rain);
  CHECK(cnr == doctest::Approx(ref).epsilon(1e-3));
  CHECK(cnr == doctest::Approx(8.77).epsilon(2e-3));

  // rain loss subtracts one for one in dB
  FeederLinkConditions c{8000.0, 10.0, 13.9, 0.0, 0.0};
  const double loss = rain_attenuation(10.0, 13.9, rain);
  CHECK(fl_cnr_db(c, fl, rain) == doctest::Approx(cnr - loss).epsilon(1e-12));

  // strictly decreasing in distance and rain rate
  double prev = fl_cnr_db(1000.0, 45.0, 0.0, fl, rain);
  for (double d = 1500.0; d <= 16000.0; d += 500.0) {
    const double v = fl_cnr_db(d, 45.0, 0.0, fl, rain);
    CHECK(v < prev);
    prev = v;
  }
  prev = fl_cnr_db(9000.0, 45.0, 0.0, fl, rain);
  for (double rho = 0.5; rho <= 50.0; rho += 0.5) {
    const double v = fl_cnr_db(9000.0, 45.0, rho, fl, rain);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("beam roll-off is off by default") {
  FeederLinkParams fl;
  CHECK(beam_rolloff_loss_db(3.0, fl) == 0.0);
  fl.beam_rolloff_3db_deg = 2.0;
  CHECK(beam_rolloff_loss_db(2.0, fl) == doctest::Approx(12.0));
  CHECK(beam_rolloff_loss_db(0.0, fl) == 0.0);
}

TEST_CASE("Shannon capacity") {
  CHECK(shannon_capacity(0.0, 100e6) == 0.0);
  CHECK(shannon_capacity(1.0, 100e6) == doctest::Approx(100e6));
  CHECK(shannon_capacity(from_db(8.8), 100e6) == doctest::Approx(310.2e6).epsilon(1e-3));
  CHECK_THROWS_AS(shannon_capacity(-0.1, 100e6), std::invalid_argument);
  CHECK_THROWS_AS(shannon_capacity(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("optical gains and received power") {
  const IslParams p;
  CHECK(optical_tx_gain(15e-6) == doctest::Approx(7.111e10).epsilon(1e-3));
  CHECK(to_db(optical_tx_gain(15e-6)) == doctest::Approx(108.5).epsilon(1e-3));
  CHECK(optical_rx_gain(0.08, 1550e-9) == doctest::Approx(2.63e10).epsilon(2e-3));
  CHECK(to_db(optical_rx_gain(0.08, 1550e-9)) == doctest::Approx(104.2).epsilon(1e-3));

  const IslBudget b = isl_budget(14433.0, p);
  CHECK(b.tx_pointing_loss == doctest::Approx(std::exp(-0.0711111)).epsilon(1e-6));
  CHECK(to_db(b.tx_pointing_loss) == doctest::Approx(-0.309).epsilon(1e-2));

  const double ref = oracle::optical_rx_dbm_spreadsheet(5.0, 0.8, 0.8, 15e-6, 0.08, 1550e-9, 1e-6, 1e-6, 14433.0);
  const double got = watt_to_dbm(isl_received_power(14433.0, p));
  CHECK(got == doctest::Approx(ref).epsilon(1e-9));
  CHECK(std::abs(got - (-34.1)) <= 0.2);
  CHECK(got > p.rx_sensitivity_dbm);
}

TEST_CASE("pointing loss bounds") {
  CHECK(pointing_loss(1e10, 0.0) == 1.0);
  for (double e : {1e-7, 1e-6, 5e-6}) {
    const double l = pointing_loss(1e10, e);
    CHECK(l > 0.0);
    CHECK(l < 1.0);
  }
}

TEST_CASE("optical budget reduces to Friis when the other factors are one") {
  IslParams p;
  p.tx_efficiency = 1.0;
  p.rx_efficiency = 1.0;
  p.tx_pointing_error_rad = 0.0;
  p.rx_pointing_error_rad = 0.0;
  p.divergence_full_angle_rad = 4.0;                  // 16 / 4^2 = 1
  p.rx_telescope_diameter_m = p.wavelength_m / constants::kPi;  // (D pi / lambda)^2 = 1
  const double d = 5000.0;
  const double friis = p.tx_power_w * std::pow(p.wavelength_m / (4.0 * constants::kPi * d * 1e3), 2);
  CHECK(isl_received_power(d, p) == doctest::Approx(friis).epsilon(1e-12));
}

TEST_CASE("ISL capacity modes") {
  IslParams p;
  CHECK(isl_capacity(1e5, p) == 600e6);
  p.fixed_capacity_bps.reset();
  p.noise_power_w = 1e-9;
  p.bandwidth_hz = 1e9;
  const double pr = isl_received_power(14433.0, p);
  CHECK(isl_capacity(14433.0, p) == doctest::Approx(1e9 * std::log2(1.0 + pr / 1e-9)));
  // far enough to fall below the -35.5 dBm sensitivity
  CHECK(isl_capacity(30000.0, p) == 0.0);
}

TEST_CASE("dB round trip") {
  for (double v : {1e-12, 3.7e-5, 0.5, 1.0, 42.0, 7.1e10}) {
    CHECK(std::abs(from_db(to_db(v)) - v) / v < 1e-12);
    CHECK(std::abs(dbm_to_watt(watt_to_dbm(v)) - v) / v < 1e-12);
  }
}

TEST_CASE("parameter validation") {
  FeederLinkParams fl;
  fl.bandwidth_hz = 0;
  CHECK_THROWS_AS(fl.validate("$.feeder_link"), ScenarioError);
  RainModelParams r;
  r.coeff_a = -1;
  CHECK_THROWS_AS(r.validate("$.rain_model"), ScenarioError);
  IslParams i;
  i.tx_efficiency = 1.5;
  CHECK_THROWS_AS(i.validate("$.isl"), ScenarioError);
  i = IslParams{};
  i.fixed_capacity_bps = 0.0;
  CHECK_THROWS_AS(i.validate("$.isl"), ScenarioError);
}
