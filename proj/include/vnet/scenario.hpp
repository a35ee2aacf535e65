#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace vnet {

struct MobilityModel {
  enum class Kind { Poisson, Interrupted };
  Kind kind = Kind::Poisson;
  double mean_speed_ms = 100.0 / 3.6;  // Poisson: single class
  double low_speed_ms = 60.0 / 3.6;    // Interrupted: slow class mean
  double high_speed_ms = 100.0 / 3.6;  // Interrupted: fast class mean
  double low_speed_fraction = 0.0;     // Interrupted: P(slow class)
};

struct RoadLayout {
  int lanes = 3;
  double lane_width_m = 3.5;
  double length_m = 6000.0;
  double lane_center_y(int lane) const { return (lane + 0.5) * lane_width_m; }
  double width_m() const { return lanes * lane_width_m; }
};

struct VehicleState {
  int id = -1;
  int lane = 0;
  double x = 0.0;      // wraps at road length
  double speed = 0.0;  // m/s, constant per vehicle
};

struct UavConfig {
  int count = 5;
  double height_m = 100.0;
  double speed_ms = 20.0;
  double orbit_radius_m = 100.0;
  double coverage_radius_m = 500.0;
  double tx_power_avg_w = 1.0;  // 30 dBm
  double tx_power_peak_w = 2.0;
};

struct UavState {
  int id = -1;  // node id, offset past the vehicles
  double center_x = 0.0;
  double center_y = 0.0;
  double phase = 0.0;  // rad along the orbit, counterclockwise
  double height = 100.0;
  double orbit_radius = 100.0;
  double angular_rate = 0.2;  // rad/s = speed / radius
  double coverage_radius = 500.0;
  double tx_power_w = 1.0;

  double ground_x() const { return center_x + orbit_radius * std::cos(phase); }
  double ground_y() const { return center_y + orbit_radius * std::sin(phase); }
  double ground_x_at(double dt_s) const {
    return center_x + orbit_radius * std::cos(phase + angular_rate * dt_s);
  }
  double ground_y_at(double dt_s) const {
    return center_y + orbit_radius * std::sin(phase + angular_rate * dt_s);
  }
};

struct ScenarioConfig {
  RoadLayout road;
  int vehicles_per_lane = 60;
  MobilityModel mobility;
  UavConfig uavs;
};

// Node ids: vehicles 0..V-1 (lane-major), UAVs V..V+U-1.
struct ScenarioState {
  RoadLayout road;
  std::vector<VehicleState> vehicles;
  std::vector<UavState> uavs;
  double slot_s = 0.1;

  int vehicle_count() const { return static_cast<int>(vehicles.size()); }
  int node_count() const { return static_cast<int>(vehicles.size() + uavs.size()); }
  bool is_uav(int node) const { return node >= vehicle_count(); }
  const VehicleState& vehicle(int node) const { return vehicles[node]; }
  const UavState& uav(int node) const { return uavs[node - vehicle_count()]; }
  double node_ground_x(int node) const {
    return is_uav(node) ? uav(node).ground_x() : vehicles[node].x;
  }
  double node_ground_y(int node) const {
    return is_uav(node) ? uav(node).ground_y()
                        : road.lane_center_y(vehicles[node].lane);
  }
  double node_height(int node) const { return is_uav(node) ? uav(node).height : 0.0; }
};

// Signed longitudinal offset from x_from to x_to on the periodic road, in (-L/2, L/2].
double wrap_dx(double x_from, double x_to, double road_length);

// Planar distance with the periodic longitudinal metric.
double ground_distance(const ScenarioState& s, int a, int b);
// Adds the height difference (nonzero only when a UAV is involved).
double distance_3d(const ScenarioState& s, int a, int b);

// One placement draw: headway gap (already clamped to the 2 m minimum) and speed.
struct VehicleDraw {
  double gap;
  double speed;
};
VehicleDraw sample_vehicle(const MobilityModel& m, std::mt19937_64& rng);

// Throws std::runtime_error naming the lane if the sampled chain overflows the road.
ScenarioState generate_scenario(const ScenarioConfig& cfg, std::uint64_t seed,
                                double slot_s = 0.1);

ScenarioState advance(ScenarioState s, int slots);
void advance_in_place(ScenarioState& s, int slots);

enum class BlockageCase {
  Direct,          // clear line of sight
  CrossLane,       // non-adjacent lanes, intermediate-lane vehicle in the corridor
  SameLaneMulti,   // same lane, two or more vehicles strictly between
  SameLaneSingle,  // same lane, exactly one vehicle strictly between
};

struct BlockageInfo {
  BlockageCase kind = BlockageCase::Direct;
  int blocker = -1;  // set for SameLaneSingle
};

// Corridor half-width for the cross-lane obstruction test.
inline constexpr double kCorridorHalfWidthM = 1.0;

BlockageInfo classify_blockage(const ScenarioState& s, int src, int dst);

}  // namespace vnet
