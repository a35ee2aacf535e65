#include "vnet/relay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vnet {

namespace {

double norm_x(double x, double L) {
  double w = std::fmod(x, L);
  if (w < 0.0) w += L;
  return w;
}

struct Interval {
  double lo, hi;
};

int split_arc(double start, double len, double L, Interval out[2]) {
  if (len <= 0.0) return 0;
  start = norm_x(start, L);
  len = std::min(len, L);
  if (start + len <= L) {
    out[0] = {start, start + len};
    return 1;
  }
  out[0] = {start, L};
  out[1] = {0.0, start + len - L};
  return 2;
}

}  // namespace

std::vector<int> CandidateRelaySet::all() const {
  std::vector<int> out = vehicles;
  out.insert(out.end(), uavs.begin(), uavs.end());
  return out;
}

double arc_intersection_length(double start_a, double len_a, double start_b,
                               double len_b, double road_length) {
  if (road_length <= 0.0) return 0.0;
  Interval a[2], b[2];
  int na = split_arc(start_a, len_a, road_length, a);
  int nb = split_arc(start_b, len_b, road_length, b);
  double total = 0.0;
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j)
      total += std::max(0.0, std::min(a[i].hi, b[j].hi) - std::max(a[i].lo, b[j].lo));
  return total;
}

long long estimate_slots(const Flow& flow, double rate_bps, int total_slots,
                         double slot_s) {
  (void)slot_s;
  if (rate_bps <= 0.0) throw std::domain_error("estimate_slots: rate must be positive");
  double x = flow.demand_rate_bps * static_cast<double>(total_slots) / rate_bps;
  double c = std::ceil(x - x * 1e-12);
  if (c > 9e14) return 900000000000000LL;
  return static_cast<long long>(c);
}

LaneSegment ideal_path(const Flow& flow, const ScenarioState& s, long long xi) {
  const VehicleState& a = s.vehicles[flow.src];
  const VehicleState& b = s.vehicles[flow.dst];
  double L = s.road.length_m;
  double horizon = xi * s.slot_s;
  double span = wrap_dx(a.x, b.x, L);
  if (flow.blockage == BlockageCase::CrossLane) {
    LaneSegment seg;
    seg.start_x = norm_x(a.x + span / 2.0, L);
    seg.length_m = 0.5 * (a.speed + b.speed) * horizon;
    seg.lane = (a.lane + b.lane) / 2;
    return seg;
  }
  if (flow.blockage == BlockageCase::SameLaneMulti) {
    LaneSegment seg;
    seg.length_m = std::fabs(span) + b.speed * horizon;
    seg.start_x = span >= 0.0 ? a.x : norm_x(a.x - seg.length_m, L);
    seg.lane = a.lane;
    return seg;
  }
  throw std::logic_error("ideal_path: blockage case has no relay corridor");
}

double overlap_ratio(const VehicleState& candidate, const LaneSegment& ideal,
                     long long xi, const ScenarioState& s) {
  double plen = candidate.speed * xi * s.slot_s;
  if (plen <= 0.0) return 0.0;
  double L = s.road.length_m;
  double inter = arc_intersection_length(candidate.x, plen, ideal.start_x,
                                         ideal.length_m, L);
  return inter / std::min(plen, L);
}

namespace {

LaneSegment same_lane_segment(const Flow& flow, const ScenarioState& s, long long xi) {
  const VehicleState& a = s.vehicles[flow.src];
  const VehicleState& b = s.vehicles[flow.dst];
  double L = s.road.length_m;
  double span = wrap_dx(a.x, b.x, L);
  LaneSegment seg;
  seg.length_m = std::fabs(span) + b.speed * xi * s.slot_s;
  seg.start_x = span >= 0.0 ? a.x : norm_x(a.x - seg.length_m, L);
  seg.lane = a.lane;
  return seg;
}

double max_arc_distance(double start, double len, double arc_y, double px, double py,
                        double L) {
  len = std::min(len, L);
  auto dist = [&](double x) { return std::hypot(wrap_dx(px, x, L), arc_y - py); };
  double m = std::max(dist(start), dist(start + len));
  double anti_off = norm_x(px + L / 2.0 - start, L);
  if (anti_off <= len) m = std::max(m, std::hypot(L / 2.0, arc_y - py));
  return m;
}

}  // namespace

CandidateRelaySet build_candidate_set(const Flow& flow, const ScenarioState& s,
                                      const ChannelParams& p,
                                      const std::vector<int>& busy, int total_slots) {
  if (flow.blockage == BlockageCase::Direct)
    throw std::logic_error("candidate set: flow has line of sight");
  auto is_busy = [&](int id) {
    return std::find(busy.begin(), busy.end(), id) != busy.end();
  };

  ChannelParams det = p;
  det.fading = FadingMode::Deterministic;
  ActiveLink self{flow.id, 0, Link{flow.src, flow.dst, LinkKind::VehicleToVehicle}};
  double r_free = rate_bps(sinr_at(s, self, {self}, det, nullptr).sinr, det);
  long long xi = estimate_slots(flow, r_free, total_slots, s.slot_s);

  CandidateRelaySet out;
  out.xi = xi;
  const VehicleState& a = s.vehicles[flow.src];

  if (flow.blockage == BlockageCase::SameLaneSingle) {
    out.segment = same_lane_segment(flow, s, xi);
    out.candidate_lane = a.lane;
    if (flow.blocker >= 0 && !is_busy(flow.blocker)) out.vehicles.push_back(flow.blocker);
  } else if (flow.blockage == BlockageCase::CrossLane) {
    out.segment = ideal_path(flow, s, xi);
    out.candidate_lane = out.segment.lane;
    for (const auto& v : s.vehicles) {
      if (v.lane != out.candidate_lane || v.id == flow.src || v.id == flow.dst) continue;
      if (is_busy(v.id)) continue;
      if (overlap_ratio(v, out.segment, xi, s) >= kOverlapThreshold)
        out.vehicles.push_back(v.id);
    }
  } else {
    out.segment = ideal_path(flow, s, xi);
    std::vector<int> adj_lanes;
    if (a.lane - 1 >= 0) adj_lanes.push_back(a.lane - 1);
    if (a.lane + 1 < s.road.lanes) adj_lanes.push_back(a.lane + 1);
    std::vector<int> best;
    int best_lane = -1;
    for (int lane : adj_lanes) {
      std::vector<int> found;
      for (const auto& v : s.vehicles) {
        if (v.lane != lane || v.id == flow.src || v.id == flow.dst) continue;
        if (is_busy(v.id)) continue;
        if (overlap_ratio(v, out.segment, xi, s) >= kOverlapThreshold)
          found.push_back(v.id);
      }
      if (best_lane < 0 || found.size() > best.size()) {
        best = std::move(found);
        best_lane = lane;
      }
    }
    out.vehicles = std::move(best);
    out.candidate_lane = best_lane < 0 ? a.lane : best_lane;
    out.segment.lane = out.candidate_lane;
  }

  std::sort(out.vehicles.begin(), out.vehicles.end());

  long long window = std::min<long long>(xi, total_slots);
  double arc_y = s.road.lane_center_y(out.segment.lane);
  for (const auto& u : s.uavs) {
    if (is_busy(u.id)) continue;
    bool ok = true;
    for (long long k = 0; k <= window && ok; ++k) {
      double dt = k * s.slot_s;
      ok = max_arc_distance(out.segment.start_x, out.segment.length_m, arc_y,
                            u.ground_x_at(dt), u.ground_y_at(dt),
                            s.road.length_m) <= u.coverage_radius;
    }
    if (ok) out.uavs.push_back(u.id);
  }
  return out;
}

std::vector<Link> direct_path(const Flow& flow) {
  return {Link{flow.src, flow.dst, LinkKind::VehicleToVehicle}};
}

std::vector<Link> relay_path(const Flow& flow, int relay, const ScenarioState& s) {
  if (s.is_uav(relay))
    return {Link{flow.src, relay, LinkKind::VehicleToUav},
            Link{relay, flow.dst, LinkKind::UavToVehicle}};
  return {Link{flow.src, relay, LinkKind::VehicleToVehicle},
          Link{relay, flow.dst, LinkKind::VehicleToVehicle}};
}

int select_relay(const Flow& flow, const CandidateRelaySet& candidates,
                 RelayPolicy policy, const ScenarioState& s,
                 const ConflictCount& conflicts, std::mt19937_64& rng) {
  std::vector<int> all = candidates.all();
  if (all.empty()) throw std::logic_error("select_relay: empty candidate set");
  if (policy == RelayPolicy::Random) {
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    return all[pick(rng)];
  }
  int best = -1;
  int best_count = std::numeric_limits<int>::max();
  for (int id : all) {
    int c = conflicts(relay_path(flow, id, s));
    if (c < best_count) {
      best_count = c;
      best = id;
    }
  }
  return best;
}

double v2v_range_m(const ChannelParams& p) {
  double num = p.attenuation_vehicle() * p.tx_power_vehicle_w *
               db_to_linear(p.boresight_gain_dbi);
  return std::pow(num / noise_power_w(p), 1.0 / p.alpha_vehicle);
}

}  // namespace vnet
