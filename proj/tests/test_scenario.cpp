#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "vnet/scenario.hpp"

using namespace vnet;

namespace {

ScenarioState flat_road(int lanes = 3, double length = 6000.0, double width = 3.5) {
  ScenarioState s;
  s.road.lanes = lanes;
  s.road.lane_width_m = width;
  s.road.length_m = length;
  s.slot_s = 0.1;
  return s;
}

int add_vehicle(ScenarioState& s, int lane, double x, double speed) {
  VehicleState v;
  v.id = static_cast<int>(s.vehicles.size());
  v.lane = lane;
  v.x = x;
  v.speed = speed;
  s.vehicles.push_back(v);
  return v.id;
}

}  // namespace

TEST_CASE("longitudinal wrap maps into the half-open centered interval") {
  const double L = 6000.0;
  CHECK(wrap_dx(0.0, 1500.0, L) == doctest::Approx(1500.0));
  CHECK(wrap_dx(0.0, 4500.0, L) == doctest::Approx(-1500.0));
  CHECK(wrap_dx(4500.0, 0.0, L) == doctest::Approx(1500.0));
  CHECK(wrap_dx(0.0, 3000.0, L) == doctest::Approx(3000.0));  // +L/2 kept positive
  CHECK(wrap_dx(100.0, 100.0, L) == doctest::Approx(0.0));
  // distance through the seam is shorter than the naive difference
  ScenarioState s = flat_road(1);
  int a = add_vehicle(s, 0, 5950.0, 10.0);
  int b = add_vehicle(s, 0, 50.0, 10.0);
  CHECK(ground_distance(s, a, b) == doctest::Approx(100.0));
}

TEST_CASE("scenario generation is deterministic per seed and lane-major") {
  ScenarioConfig cfg;
  cfg.road.length_m = 6000.0;
  cfg.vehicles_per_lane = 20;
  cfg.uavs.count = 3;
  ScenarioState a = generate_scenario(cfg, 42);
  ScenarioState b = generate_scenario(cfg, 42);
  ScenarioState c = generate_scenario(cfg, 43);
  REQUIRE(a.vehicles.size() == 60);
  REQUIRE(a.uavs.size() == 3);
  bool same = true, diff = false;
  for (std::size_t i = 0; i < a.vehicles.size(); ++i) {
    same = same && a.vehicles[i].x == b.vehicles[i].x;
    diff = diff || a.vehicles[i].x != c.vehicles[i].x;
  }
  CHECK(same);
  CHECK(diff);
  for (std::size_t i = 0; i < a.vehicles.size(); ++i) {
    CHECK(a.vehicles[i].id == static_cast<int>(i));
    CHECK(a.vehicles[i].lane == static_cast<int>(i) / 20);
    CHECK(a.vehicles[i].x >= 0.0);
    CHECK(a.vehicles[i].x < cfg.road.length_m);
  }
  // UAV ids continue past the vehicles; orbit centers spread along the road
  for (std::size_t k = 0; k < a.uavs.size(); ++k) {
    CHECK(a.uavs[k].id == 60 + static_cast<int>(k));
    CHECK(a.uavs[k].center_x ==
          doctest::Approx((k + 0.5) * cfg.road.length_m / 3.0));
    CHECK(a.is_uav(a.uavs[k].id));
  }
  CHECK_FALSE(a.is_uav(0));
}

TEST_CASE("headway draws follow the exponential gap law with the 2 m floor") {
  MobilityModel m;
  m.kind = MobilityModel::Kind::Poisson;
  m.mean_speed_ms = 100.0 / 3.6;
  std::mt19937_64 rng(7);
  const int n = 100000;
  double gsum = 0.0, ssum = 0.0, gmin = 1e9;
  for (int i = 0; i < n; ++i) {
    VehicleDraw d = sample_vehicle(m, rng);
    gsum += d.gap;
    ssum += d.speed;
    gmin = std::min(gmin, d.gap);
  }
  double mean_gap = gsum / n;
  // clamping at 2 m adds a small positive bias to the 2*v mean
  double target = 2.0 * m.mean_speed_ms;
  CHECK(mean_gap > target * 0.98);
  CHECK(mean_gap < target * 1.05);
  CHECK(gmin >= 2.0);
  CHECK(ssum / n == doctest::Approx(m.mean_speed_ms));
}

TEST_CASE("interrupted mobility mixes the two speed classes by the low fraction") {
  MobilityModel m;
  m.kind = MobilityModel::Kind::Interrupted;
  m.low_speed_ms = 60.0 / 3.6;
  m.high_speed_ms = 100.0 / 3.6;

  std::mt19937_64 rng(11);
  m.low_speed_fraction = 1.0;
  for (int i = 0; i < 200; ++i) CHECK(sample_vehicle(m, rng).speed == m.low_speed_ms);
  m.low_speed_fraction = 0.0;
  for (int i = 0; i < 200; ++i) CHECK(sample_vehicle(m, rng).speed == m.high_speed_ms);

  m.low_speed_fraction = 0.3;
  int low = 0;
  const int n = 50000;
  for (int i = 0; i < n; ++i)
    if (sample_vehicle(m, rng).speed == m.low_speed_ms) ++low;
  double frac = static_cast<double>(low) / n;
  CHECK(frac == doctest::Approx(0.3).epsilon(0.05));
}

TEST_CASE("placement overflow reports the offending lane") {
  ScenarioConfig cfg;
  cfg.road.length_m = 200.0;
  cfg.vehicles_per_lane = 50;  // mean chain ~ 50 * 55 m >> 200 m
  CHECK_THROWS_WITH_AS(generate_scenario(cfg, 1),
                       doctest::Contains("lane"), std::runtime_error);
}

TEST_CASE("advancing preserves relative geometry for equal speeds and wraps x") {
  ScenarioState s = flat_road(2, 1000.0);
  int a = add_vehicle(s, 0, 950.0, 20.0);
  int b = add_vehicle(s, 1, 150.0, 20.0);
  double d0 = ground_distance(s, a, b);
  advance_in_place(s, 37);
  CHECK(ground_distance(s, a, b) == doctest::Approx(d0));
  CHECK(s.vehicles[a].x == doctest::Approx(std::fmod(950.0 + 20.0 * 3.7, 1000.0)));
  CHECK(s.vehicles[a].x >= 0.0);
  CHECK(s.vehicles[a].x < 1000.0);

  SUBCASE("functional advance leaves the source untouched") {
    ScenarioState t = flat_road(1, 1000.0);
    add_vehicle(t, 0, 10.0, 30.0);
    ScenarioState t2 = advance(t, 5);
    CHECK(t.vehicles[0].x == doctest::Approx(10.0));
    CHECK(t2.vehicles[0].x == doctest::Approx(25.0));
  }
}

TEST_CASE("uav orbit advances phase and the ground track stays on the circle") {
  ScenarioState s = flat_road();
  UavState u;
  u.id = 0;
  u.center_x = 3000.0;
  u.center_y = 5.25;
  u.orbit_radius = 100.0;
  u.angular_rate = 0.2;
  u.height = 100.0;
  s.uavs.push_back(u);
  advance_in_place(s, 10);  // 1 s
  CHECK(s.uavs[0].phase == doctest::Approx(0.2));
  double dx = s.uavs[0].ground_x() - 3000.0;
  double dy = s.uavs[0].ground_y() - 5.25;
  CHECK(std::hypot(dx, dy) == doctest::Approx(100.0));
  CHECK(s.uavs[0].ground_x_at(5.0) == doctest::Approx(3000.0 + 100.0 * std::cos(0.2 + 1.0)));
}

TEST_CASE("3d distance adds height only for uav endpoints") {
  ScenarioState s = flat_road(1);
  int a = add_vehicle(s, 0, 0.0, 10.0);
  int b = add_vehicle(s, 0, 300.0, 10.0);
  UavState u;
  u.id = 2;
  u.center_x = 0.0;
  u.center_y = s.road.lane_center_y(0);
  u.orbit_radius = 0.0;
  u.height = 100.0;
  s.uavs.push_back(u);
  CHECK(distance_3d(s, a, b) == doctest::Approx(300.0));
  CHECK(distance_3d(s, a, 2) == doctest::Approx(100.0));
  CHECK(distance_3d(s, b, 2) == doctest::Approx(std::hypot(300.0, 100.0)));
}

TEST_CASE("blockage classification covers the four cases") {
  ScenarioState s = flat_road(3, 6000.0);
  int a = add_vehicle(s, 0, 1000.0, 20.0);   // 0
  int b = add_vehicle(s, 0, 1300.0, 20.0);   // 1
  int c = add_vehicle(s, 0, 1150.0, 20.0);   // 2: between a and b
  int d = add_vehicle(s, 1, 1100.0, 20.0);   // 3: adjacent lane
  int e = add_vehicle(s, 2, 1200.0, 20.0);   // 4: two lanes over
  int f = add_vehicle(s, 0, 1050.0, 20.0);   // 5: second same-lane blocker

  SUBCASE("same lane, one vehicle strictly between") {
    ScenarioState t = s;
    t.vehicles.erase(t.vehicles.begin() + f);  // keep a, b, c, d, e
    BlockageInfo info = classify_blockage(t, a, b);
    CHECK(info.kind == BlockageCase::SameLaneSingle);
    CHECK(info.blocker == c);
  }
  SUBCASE("same lane, two or more between") {
    BlockageInfo info = classify_blockage(s, a, b);
    CHECK(info.kind == BlockageCase::SameLaneMulti);
  }
  SUBCASE("adjacent lanes are never blocked") {
    CHECK(classify_blockage(s, a, d).kind == BlockageCase::Direct);
  }
  SUBCASE("two lanes apart with a mid-lane vehicle near the segment") {
    BlockageInfo info = classify_blockage(s, a, e);  // d sits by the midpoint
    CHECK(info.kind == BlockageCase::CrossLane);
  }
  SUBCASE("two lanes apart with the corridor clear") {
    ScenarioState t = s;
    t.vehicles[d].x = 4000.0;  // far from the a-e segment
    CHECK(classify_blockage(t, a, e).kind == BlockageCase::Direct);
  }
  SUBCASE("same lane with no vehicle between") {
    ScenarioState t = flat_road(1);
    int p = add_vehicle(t, 0, 100.0, 10.0);
    int q = add_vehicle(t, 0, 400.0, 10.0);
    add_vehicle(t, 0, 600.0, 10.0);  // outside the span
    CHECK(classify_blockage(t, p, q).kind == BlockageCase::Direct);
  }
  SUBCASE("betweenness respects the wrap seam") {
    ScenarioState t = flat_road(1, 6000.0);
    int p = add_vehicle(t, 0, 5950.0, 10.0);
    int q = add_vehicle(t, 0, 70.0, 10.0);
    int r = add_vehicle(t, 0, 10.0, 10.0);  // between p and q across the seam
    BlockageInfo info = classify_blockage(t, p, q);
    CHECK(info.kind == BlockageCase::SameLaneSingle);
    CHECK(info.blocker == r);
  }
}
