#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "vnet/channel.hpp"
#include "vnet/scenario.hpp"

namespace vnet {

struct Flow {
  int id = -1;
  int src = -1;
  int dst = -1;
  double demand_rate_bps = 0.0;  // sustained-rate requirement Q
  double demand_bits = 0.0;      // Q * M * T, per hop
  BlockageCase blockage = BlockageCase::Direct;
  int blocker = -1;  // SameLaneSingle only
};

// Directed arc on the periodic road: starts at start_x, extends length_m in +x.
struct LaneSegment {
  double start_x = 0.0;
  double length_m = 0.0;
  int lane = 0;
};

// Length of the intersection of two arcs on a circle of circumference road_length.
double arc_intersection_length(double start_a, double len_a, double start_b,
                               double len_b, double road_length);

// Slot estimate for one hop of the flow at the given interference-free rate.
// Throws std::domain_error when the rate is not positive.
long long estimate_slots(const Flow& flow, double rate_bps, int total_slots,
                         double slot_s);

// Predicted relay corridor. Only defined for CrossLane and SameLaneMulti;
// throws std::logic_error otherwise. CrossLane: anchored at the src/dst
// midpoint on the intermediate lane, length = mean endpoint travel over xi
// slots. SameLaneMulti: anchored at src toward dst, length = separation plus
// dst travel; the lane field carries the flow's own lane (candidates come from
// an adjacent lane chosen during candidate construction).
LaneSegment ideal_path(const Flow& flow, const ScenarioState& s, long long xi);

// |P(candidate) ∩ ideal| / |P(candidate)| with P = [x, x + speed*xi*T]; 0 when
// the candidate path has zero length.
double overlap_ratio(const VehicleState& candidate, const LaneSegment& ideal,
                     long long xi, const ScenarioState& s);

inline constexpr double kOverlapThreshold = 0.5;

struct CandidateRelaySet {
  std::vector<int> vehicles;  // node ids, ascending
  std::vector<int> uavs;      // node ids, ascending
  LaneSegment segment;        // corridor used for selection and coverage
  long long xi = 0;
  int candidate_lane = -1;  // lane the vehicle candidates were taken from

  bool empty() const { return vehicles.empty() && uavs.empty(); }
  std::vector<int> all() const;
};

// Candidate relays for a blocked flow: corridor vehicles passing the overlap
// threshold (CrossLane: intermediate lane; SameLaneMulti: adjacent lane with
// more passing candidates, tie to the lower lane; SameLaneSingle: the blocker)
// plus UAVs whose coverage disk contains the corridor at every slot offset
// 0..min(xi, total_slots). src, dst and busy nodes are excluded.
// Throws std::logic_error when the flow is not blocked.
CandidateRelaySet build_candidate_set(const Flow& flow, const ScenarioState& s,
                                      const ChannelParams& p,
                                      const std::vector<int>& busy,
                                      int total_slots);

std::vector<Link> direct_path(const Flow& flow);
std::vector<Link> relay_path(const Flow& flow, int relay, const ScenarioState& s);

enum class RelayPolicy { Random, MinContention };

// Counts how many active flows a candidate two-hop path collides with.
using ConflictCount = std::function<int(const std::vector<Link>&)>;

// Random: uniform over the combined candidate list. MinContention: fewest
// conflicts per ConflictCount, ties to the smallest node id.
// Throws std::logic_error on an empty candidate set.
int select_relay(const Flow& flow, const CandidateRelaySet& candidates,
                 RelayPolicy policy, const ScenarioState& s,
                 const ConflictCount& conflicts, std::mt19937_64& rng);

// Greatest distance at which a single interference-free deterministic V2V link
// still reaches SINR 1 (0 dB).
double v2v_range_m(const ChannelParams& p);

}  // namespace vnet
