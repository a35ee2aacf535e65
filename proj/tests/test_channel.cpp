#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "vnet/channel.hpp"
#include "vnet/scenario.hpp"

using namespace vnet;

namespace {

ChannelParams defaults() { return ChannelParams{}; }

ScenarioState lane_state(double length = 6000.0) {
  ScenarioState s;
  s.road.lanes = 1;
  s.road.lane_width_m = 3.5;
  s.road.length_m = length;
  s.slot_s = 0.1;
  return s;
}

int add_vehicle(ScenarioState& s, int lane, double x, double speed = 20.0) {
  VehicleState v;
  v.id = static_cast<int>(s.vehicles.size());
  v.lane = lane;
  v.x = x;
  v.speed = speed;
  s.vehicles.push_back(v);
  return v.id;
}

}  // namespace

TEST_CASE("unit conversions round-trip") {
  CHECK(dbm_to_watts(40.0) == doctest::Approx(10.0));
  CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0));
  CHECK(watts_to_dbm(10.0) == doctest::Approx(40.0));
  CHECK(db_to_linear(linear_to_db(123.456)) == doctest::Approx(123.456));
}

TEST_CASE("derived propagation constants match hand-computed values") {
  ChannelParams p = defaults();
  // (c/4 pi f)^alpha for 30 GHz
  CHECK(p.attenuation_vehicle() == doctest::Approx(1.7863861376167596e-08).epsilon(1e-12));
  CHECK(p.attenuation_uav() == doctest::Approx(6.332573977646112e-07).epsilon(1e-12));
  CHECK(p.wavelength_m() == doctest::Approx(3.0e8 / 30.0e9).epsilon(1e-12));
}

TEST_CASE("thermal noise over the 2 GHz band") {
  ChannelParams p = defaults();
  double n = noise_power_w(p);
  CHECK(n == doctest::Approx(7.962143411069939e-14).epsilon(1e-12));
  // coarse cross-check against -134 dBm/MHz * 2000 MHz rounded to 7.94e-14
  CHECK(std::abs(n - 7.94e-14) / 7.94e-14 < 0.005);
}

TEST_CASE("beam pattern: quadratic rolloff capped at 26 dB below peak") {
  ChannelParams p = defaults();
  CHECK(antenna_gain_dbi(0.0, p) == 20.0);
  CHECK(antenna_gain_dbi(30.0, p) == 19.0);
  CHECK(antenna_gain_dbi(90.0, p) == 11.0);
  CHECK(antenna_gain_dbi(180.0, p) == -6.0);
  CHECK(antenna_gain_dbi(-30.0, p) == 19.0);
  // beyond the cap angle the floor is flat
  CHECK(antenna_gain_dbi(153.1, p) == doctest::Approx(-6.0));
}

TEST_CASE("received power follows the two path-loss laws") {
  ChannelParams p = defaults();
  // vehicle link at 100 m, boresight gain, unit fading
  double pr_v = rx_power_w(LinkKind::VehicleToVehicle, 100.0, p.boresight_gain_dbi, 1.0, p);
  CHECK(pr_v == doctest::Approx(1.7863861376167598e-10).epsilon(1e-12));
  // downlink from the aerial relay at 100 m slant range
  double pr_d = rx_power_w(LinkKind::UavToVehicle, 100.0, p.boresight_gain_dbi, 1.0, p);
  CHECK(pr_d == doctest::Approx(6.3325739776461125e-09).epsilon(1e-12));
  // uplink carries vehicle power under the vehicular loss law
  double pr_u = rx_power_w(LinkKind::VehicleToUav, 100.0, p.boresight_gain_dbi, 1.0, p);
  CHECK(pr_u == doctest::Approx(pr_v).epsilon(1e-12));
  CHECK_THROWS_AS(rx_power_w(LinkKind::VehicleToVehicle, 0.0, 20.0, 1.0, p),
                  std::domain_error);
  CHECK_THROWS_AS(rx_power_w(LinkKind::VehicleToVehicle, -5.0, 20.0, 1.0, p),
                  std::domain_error);
}

TEST_CASE("fading draws have unit mean and the right spread") {
  std::mt19937_64 rng(2024);
  const int n = 100000;

  SUBCASE("gamma power fading, shape 2") {
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
      double g = sample_nakagami_power(2.0, rng);
      sum += g;
      sq += g * g;
    }
    double mean = sum / n;
    double var = sq / n - mean * mean;
    CHECK(std::abs(mean - 1.0) < 3.0 * std::sqrt(0.5 / n));
    CHECK(var == doctest::Approx(0.5).epsilon(0.05));
  }
  SUBCASE("line-of-sight power fading, 9 dB factor") {
    double k = db_to_linear(9.0);
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
      double g = sample_rician_power(k, rng);
      sum += g;
      sq += g * g;
    }
    double mean = sum / n;
    double var = sq / n - mean * mean;
    double var_exact = (1.0 + 2.0 * k) / ((1.0 + k) * (1.0 + k));
    CHECK(std::abs(mean - 1.0) < 3.0 * std::sqrt(var_exact / n));
    CHECK(var == doctest::Approx(var_exact).epsilon(0.05));
  }
  SUBCASE("deterministic mode returns 1 without consuming randomness") {
    ChannelParams p = defaults();
    p.fading = FadingMode::Deterministic;
    std::mt19937_64 a(5), b(5);
    CHECK(sample_fading(false, p, &a) == 1.0);
    CHECK(sample_fading(true, p, &a) == 1.0);
    CHECK(a() == b());
  }
}

TEST_CASE("solo link quality and rate on the shannon curve") {
  ChannelParams p = defaults();
  p.fading = FadingMode::Deterministic;
  ScenarioState s = lane_state();
  int a = add_vehicle(s, 0, 500.0);
  int b = add_vehicle(s, 0, 600.0);
  ActiveLink me{0, 0, Link{a, b, LinkKind::VehicleToVehicle}};
  SinrBreakdown sb = sinr_at(s, me, {me}, p, nullptr);
  CHECK(sb.mui_w == 0.0);
  CHECK(sb.si_w == 0.0);
  CHECK(sb.desired_w == doctest::Approx(1.7863861376167598e-10).epsilon(1e-12));
  CHECK(sb.sinr == doctest::Approx(2243.5995502581736).epsilon(1e-9));
  CHECK(rate_bps(sb.sinr, p) == doctest::Approx(17811587787.70778).epsilon(1e-9));

  // spectral-efficiency anchor: unit sinr doubles nothing, rate = eta * W exactly
  CHECK(rate_bps(1.0, p) == 1.6e9);
  CHECK(rate_bps(225.0, p) == doctest::Approx(12512286339.8643).epsilon(1e-9));
}

TEST_CASE("interference sums the deviation-weighted powers of other flows") {
  ChannelParams p = defaults();
  p.fading = FadingMode::Deterministic;
  ScenarioState s = lane_state();
  int a = add_vehicle(s, 0, 500.0);   // victim tx
  int b = add_vehicle(s, 0, 600.0);   // victim rx
  int c = add_vehicle(s, 0, 1100.0);  // interferer tx, 500 m from rx, pointing away
  ActiveLink me{0, 0, Link{a, b, LinkKind::VehicleToVehicle}};
  ActiveLink other{1, 0, Link{c, a, LinkKind::VehicleToVehicle}};
  SinrBreakdown sb = sinr_at(s, me, {me, other}, p, nullptr);
  // interferer beam points 180 degrees off the victim
  CHECK(sb.mui_w == doctest::Approx(8.026945773864365e-15).epsilon(1e-9));
  CHECK(sb.si_w == 0.0);
  CHECK(sb.sinr == doctest::Approx(2038.1279608014413).epsilon(1e-9));
  CHECK(rate_bps(sb.sinr, p) == doctest::Approx(17589978553.404648).epsilon(1e-9));

  SUBCASE("links of the same flow do not interfere with each other") {
    ActiveLink hop2{0, 1, Link{c, a, LinkKind::VehicleToVehicle}};
    SinrBreakdown clean = sinr_at(s, me, {me, hop2}, p, nullptr);
    CHECK(clean.mui_w == 0.0);
    CHECK(clean.sinr == doctest::Approx(2243.5995502581736).epsilon(1e-9));
  }
}

TEST_CASE("transmitting from the receiving node leaves the loopback residual") {
  ChannelParams p = defaults();
  p.fading = FadingMode::Deterministic;
  ScenarioState s = lane_state();
  int a = add_vehicle(s, 0, 500.0);
  int b = add_vehicle(s, 0, 600.0);
  int c = add_vehicle(s, 0, 700.0);
  ActiveLink me{0, 0, Link{a, b, LinkKind::VehicleToVehicle}};
  ActiveLink echo{1, 0, Link{b, c, LinkKind::VehicleToVehicle}};
  SinrBreakdown sb = sinr_at(s, me, {me, echo}, p, nullptr);
  CHECK(sb.si_w == doctest::Approx(p.tx_power_vehicle_w * p.self_interference).epsilon(1e-12));
  CHECK(sb.sinr == doctest::Approx(0.01786371914267393).epsilon(1e-9));
}

TEST_CASE("uav receivers see noise only") {
  ChannelParams p = defaults();
  p.fading = FadingMode::Deterministic;
  ScenarioState s = lane_state();
  int a = add_vehicle(s, 0, 500.0);
  int b = add_vehicle(s, 0, 600.0);
  int c = add_vehicle(s, 0, 540.0);
  UavState u;
  u.id = 3;
  u.center_x = 500.0;
  u.center_y = s.road.lane_center_y(0);
  u.orbit_radius = 0.0;
  u.height = 100.0;
  u.tx_power_w = 1.0;
  s.uavs.push_back(u);
  ActiveLink up{0, 0, Link{a, 3, LinkKind::VehicleToUav}};
  ActiveLink noisy{1, 0, Link{c, b, LinkKind::VehicleToVehicle}};
  SinrBreakdown sb = sinr_at(s, up, {up, noisy}, p, nullptr);
  CHECK(sb.mui_w == 0.0);
  CHECK(sb.si_w == 0.0);
  double expect = rx_power_w(LinkKind::VehicleToUav, 100.0, p.boresight_gain_dbi, 1.0, p) /
                  noise_power_w(p);
  CHECK(sb.sinr == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("beam deviation angles from road geometry") {
  ScenarioState s = lane_state();
  int a = add_vehicle(s, 0, 500.0);
  int b = add_vehicle(s, 0, 600.0);
  int c = add_vehicle(s, 0, 1100.0);
  // c aims at a (to the west); b sits east of nothing relevant: from b,
  // the directions to its served peer and to c are exactly opposite
  CHECK(deviation_deg(s, b, a, c) == doctest::Approx(180.0));
  // interferer co-located with the boresight target deviates by zero
  CHECK(deviation_deg(s, b, a, a) == doctest::Approx(0.0));
  // degenerate zero-length direction falls back to zero deviation
  CHECK(deviation_deg(s, b, a, b) == 0.0);

  ScenarioState t = lane_state();
  t.road.lanes = 2;
  t.road.lane_width_m = 500.0;
  int p0 = add_vehicle(t, 0, 0.0);
  int p1 = add_vehicle(t, 0, 50.0);
  int p2 = add_vehicle(t, 1, 0.0);
  (void)p1;
  CHECK(deviation_deg(t, p0, p1, p2) == doctest::Approx(90.0));
}

TEST_CASE("stochastic draws perturb the link quality around the mean") {
  ChannelParams p = defaults();
  p.fading = FadingMode::Stochastic;
  ScenarioState s = lane_state();
  int a = add_vehicle(s, 0, 500.0);
  int b = add_vehicle(s, 0, 600.0);
  ActiveLink me{0, 0, Link{a, b, LinkKind::VehicleToVehicle}};
  std::mt19937_64 rng(99);
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) sum += sinr_at(s, me, {me}, p, &rng).sinr;
  // mean fading is 1, so the average sinr hovers near the deterministic value
  CHECK(sum / n == doctest::Approx(2243.5995502581736).epsilon(0.02));
}
