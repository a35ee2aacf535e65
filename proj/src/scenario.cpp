#include "vnet/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace vnet {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kMinGapM = 2.0;

double wrap_position(double x, double road_length) {
  double w = std::fmod(x, road_length);
  if (w < 0.0) w += road_length;
  return w;
}
}  // namespace

double wrap_dx(double x_from, double x_to, double road_length) {
  double d = std::fmod(x_to - x_from, road_length);
  if (d <= -road_length / 2.0) d += road_length;
  if (d > road_length / 2.0) d -= road_length;
  return d;
}

double ground_distance(const ScenarioState& s, int a, int b) {
  double dx = wrap_dx(s.node_ground_x(a), s.node_ground_x(b), s.road.length_m);
  double dy = s.node_ground_y(b) - s.node_ground_y(a);
  return std::hypot(dx, dy);
}

double distance_3d(const ScenarioState& s, int a, int b) {
  double g = ground_distance(s, a, b);
  double dh = s.node_height(b) - s.node_height(a);
  return std::hypot(g, dh);
}

VehicleDraw sample_vehicle(const MobilityModel& m, std::mt19937_64& rng) {
  double speed = m.mean_speed_ms;
  if (m.kind == MobilityModel::Kind::Interrupted) {
    std::bernoulli_distribution slow(m.low_speed_fraction);
    speed = slow(rng) ? m.low_speed_ms : m.high_speed_ms;
  }
  std::exponential_distribution<double> gap(1.0 / (2.0 * speed));
  return {std::max(kMinGapM, gap(rng)), speed};
}

ScenarioState generate_scenario(const ScenarioConfig& cfg, std::uint64_t seed,
                                double slot_s) {
  if (cfg.road.lanes < 1) throw std::runtime_error("scenario: lanes must be >= 1");
  if (cfg.road.length_m <= 0.0 || cfg.road.lane_width_m <= 0.0)
    throw std::runtime_error("scenario: road dimensions must be positive");
  if (slot_s <= 0.0) throw std::runtime_error("scenario: slot duration must be positive");

  ScenarioState s;
  s.road = cfg.road;
  s.slot_s = slot_s;
  std::mt19937_64 rng(seed);

  int id = 0;
  for (int lane = 0; lane < cfg.road.lanes; ++lane) {
    if (cfg.vehicles_per_lane == 1) {
      std::uniform_real_distribution<double> anywhere(0.0, cfg.road.length_m);
      VehicleDraw d = sample_vehicle(cfg.mobility, rng);
      s.vehicles.push_back({id++, lane, anywhere(rng), d.speed});
      continue;
    }
    double x = 0.0;
    for (int i = 0; i < cfg.vehicles_per_lane; ++i) {
      VehicleDraw d = sample_vehicle(cfg.mobility, rng);
      x += d.gap;
      if (x >= cfg.road.length_m)
        throw std::runtime_error("scenario: lane " + std::to_string(lane) +
                                 " placement overflows road length");
      s.vehicles.push_back({id++, lane, x, d.speed});
    }
  }

  for (int k = 0; k < cfg.uavs.count; ++k) {
    UavState u;
    u.id = id++;
    u.center_x = (k + 0.5) * cfg.road.length_m / cfg.uavs.count;
    u.center_y = cfg.road.width_m() / 2.0;
    u.phase = 0.0;
    u.height = cfg.uavs.height_m;
    u.orbit_radius = cfg.uavs.orbit_radius_m;
    u.angular_rate =
        cfg.uavs.orbit_radius_m > 0.0 ? cfg.uavs.speed_ms / cfg.uavs.orbit_radius_m : 0.0;
    u.coverage_radius = cfg.uavs.coverage_radius_m;
    u.tx_power_w = cfg.uavs.tx_power_avg_w;
    s.uavs.push_back(u);
  }
  return s;
}

void advance_in_place(ScenarioState& s, int slots) {
  double dt = slots * s.slot_s;
  for (auto& v : s.vehicles) v.x = wrap_position(v.x + v.speed * dt, s.road.length_m);
  for (auto& u : s.uavs) u.phase = std::fmod(u.phase + u.angular_rate * dt, kTwoPi);
}

ScenarioState advance(ScenarioState s, int slots) {
  advance_in_place(s, slots);
  return s;
}

namespace {

BlockageInfo classify_same_lane(const ScenarioState& s, const VehicleState& a,
                                const VehicleState& b) {
  double span = wrap_dx(a.x, b.x, s.road.length_m);
  double lo = std::min(0.0, span);
  double hi = std::max(0.0, span);
  int between = 0;
  int blocker = -1;
  for (const auto& v : s.vehicles) {
    if (v.lane != a.lane || v.id == a.id || v.id == b.id) continue;
    double off = wrap_dx(a.x, v.x, s.road.length_m);
    if (off > lo && off < hi) {
      ++between;
      blocker = v.id;
    }
  }
  if (between == 0) return {BlockageCase::Direct, -1};
  if (between == 1) return {BlockageCase::SameLaneSingle, blocker};
  return {BlockageCase::SameLaneMulti, -1};
}

BlockageInfo classify_cross_lane(const ScenarioState& s, const VehicleState& a,
                                 const VehicleState& b) {
  double dx = wrap_dx(a.x, b.x, s.road.length_m);
  double ya = s.road.lane_center_y(a.lane);
  double yb = s.road.lane_center_y(b.lane);
  double seg_len = std::hypot(dx, yb - ya);
  if (seg_len <= 0.0) return {BlockageCase::Direct, -1};
  int lane_lo = std::min(a.lane, b.lane);
  int lane_hi = std::max(a.lane, b.lane);
  for (const auto& v : s.vehicles) {
    if (v.lane <= lane_lo || v.lane >= lane_hi) continue;
    double off = wrap_dx(a.x, v.x, s.road.length_m);
    bool between = dx > 0.0 ? (off > 0.0 && off < dx) : (off < 0.0 && off > dx);
    if (!between) continue;
    double yv = s.road.lane_center_y(v.lane);
    double line_dist = std::fabs((yb - ya) * off - dx * (yv - ya)) / seg_len;
    if (line_dist <= kCorridorHalfWidthM) return {BlockageCase::CrossLane, -1};
  }
  return {BlockageCase::Direct, -1};
}

}  // namespace

BlockageInfo classify_blockage(const ScenarioState& s, int src, int dst) {
  if (src == dst) throw std::logic_error("blockage: src and dst must differ");
  if (s.is_uav(src) || s.is_uav(dst))
    throw std::logic_error("blockage: endpoints must be vehicles");
  const VehicleState& a = s.vehicles[src];
  const VehicleState& b = s.vehicles[dst];
  int dl = std::abs(a.lane - b.lane);
  if (dl == 0) return classify_same_lane(s, a, b);
  if (dl == 1) return {BlockageCase::Direct, -1};
  return classify_cross_lane(s, a, b);
}

}  // namespace vnet
