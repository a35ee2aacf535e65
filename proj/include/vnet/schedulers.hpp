#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "vnet/contention.hpp"
#include "vnet/relay.hpp"

namespace vnet {

struct RunParams {
  int total_slots = 2000;  // horizon M
  double slot_s = 0.1;     // slot duration T
  double sigma = 1e-3;     // relative-interference grouping threshold
};

struct Activation {
  int flow = -1;
  int hop = 0;
  Link link;
  double rate_bps = 0.0;
  double delivered_bits = 0.0;
};

struct SlotRecord {
  int slot = 0;
  std::vector<Activation> activations;
};

struct FlowOutcome {
  int flow = -1;
  bool completed = false;
  bool failed = false;
  int completion_slot = -1;
  bool via_relay = false;
  int relay = -1;
  double delivered_bits = 0.0;  // capped at the demand
};

struct ScheduleResult {
  std::string scheme;
  int slots_used = 0;
  std::vector<SlotRecord> slots;
  std::vector<FlowOutcome> outcomes;        // by flow id
  std::vector<std::vector<int>> groups;     // group trace, flow ids
  std::vector<ContentionEdge> graph_edges;  // initial contention graph, if built
  bool oracle_exact = true;  // exhaustive search ran to completion
};

struct Violation {
  int slot = -1;
  std::string kind;  // path_exclusive | adjacent_links | multi_hop | hop_order
  std::string detail;
};

// Structural checks on a recorded schedule: no co-active adjacent links, at
// most one hop per flow per slot, hop-2 activations strictly after every hop-1
// activation, and never direct and relayed activations for one flow.
std::vector<Violation> validate_schedule(const ScheduleResult& r,
                                         const std::vector<Flow>& flows,
                                         const ScenarioState& s);

// All schemes advance the scenario one slot at a time and deliver rate*T bits
// per active hop per slot; a hop completes at the first slot where its
// accumulated bits reach the demand.

// Serial baseline: flows one at a time in id order; blocked flows draw a
// random candidate relay.
ScheduleResult run_tdma(const std::vector<Flow>& flows, ScenarioState s,
                        const ChannelParams& p, const RunParams& rp,
                        std::mt19937_64& rng);

// Random-relay baseline: relay drawn uniformly from all vehicles in range of
// both endpoints (no corridor filter, no UAVs, collisions allowed), then
// grouped and run like run_rcs.
ScheduleResult run_rr(const std::vector<Flow>& flows, ScenarioState s,
                      const ChannelParams& p, const RunParams& rp,
                      std::mt19937_64& rng);

// Static concurrency: random candidate relay per blocked flow, one contention
// graph, greedy grouping, groups transmit sequentially with in-group
// concurrency.
ScheduleResult run_rcs(const std::vector<Flow>& flows, ScenarioState s,
                       const ChannelParams& p, const RunParams& rp,
                       std::mt19937_64& rng);

// Dynamic concurrency: per-slot admission of non-conflicting direct flows and
// of blocked flows whose least-contended candidate relay path is conflict-free;
// completed flows leave immediately and free their relays.
ScheduleResult run_jrds(const std::vector<Flow>& flows, ScenarioState s,
                        const ChannelParams& p, const RunParams& rp,
                        std::mt19937_64& rng);

struct OracleLimits {
  int max_flows = 6;
  int max_slots = 200;
  long long node_budget = 20'000'000;
};

// Exhaustive minimum-makespan search (deterministic fading only): enumerates
// candidate-relay assignments and, per assignment, branch-and-bound over
// per-slot activation sets under the node-conflict constraints. Warm-started
// from the heuristic schemes using a copy of rng, so its result never exceeds
// theirs for the same seed. oracle_exact reports whether the search finished
// within the node budget. Throws std::invalid_argument when the instance
// exceeds the limits or fading is stochastic.
ScheduleResult run_oracle(const std::vector<Flow>& flows, ScenarioState s,
                          const ChannelParams& p, const RunParams& rp,
                          std::mt19937_64& rng, const OracleLimits& limits = {});

ScheduleResult run_scheme(const std::string& scheme, const std::vector<Flow>& flows,
                          const ScenarioState& s, const ChannelParams& p,
                          const RunParams& rp, std::mt19937_64& rng,
                          const OracleLimits& limits = {});

}  // namespace vnet
