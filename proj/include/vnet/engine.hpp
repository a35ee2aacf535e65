#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vnet/schedulers.hpp"

namespace vnet {

struct RunConfig {
  ScenarioConfig scenario;
  ChannelParams channel;
  int n_flows = 80;
  int total_slots = 2000;
  double slot_s = 0.1;
  double sigma = 1e-3;
  double demand_low_gbps = 0.1;
  double demand_high_gbps = 1.0;
  std::string scheme = "jrds";
  OracleLimits oracle;
};

// Every key optional; absent keys take the defaults above. Throws
// std::runtime_error with the offending key on malformed input.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

// Flows with distinct directed (src, dst) vehicle pairs within V2V range,
// demands uniform in [low, high]; blockage classified at generation time.
// Throws std::runtime_error when fewer eligible pairs exist than requested.
std::vector<Flow> generate_flows(const ScenarioState& s, const RunConfig& cfg,
                                 std::mt19937_64& rng);

struct RunReport {
  std::uint64_t seed = 0;
  std::string scheme;
  int n_flows = 0;
  double sigma = 0.0;
  std::string mobility;      // "pp" | "ipp"
  double vbar_kmh = 0.0;     // ipp: mixture mean
  double low_speed_pct = 0.0;
  int slots_used = 0;
  int completed = 0;
  int failed = 0;
  double throughput_demand_gbps = 0.0;      // sum of completed demand rates / (n*T)
  double throughput_delivered_gbps = 0.0;  // completed demand bits / (n*T)
  int num_groups = 0;
  double wall_ms = 0.0;
  ScheduleResult schedule;
};

// Generates scenario and flows from seed substreams, runs cfg.scheme,
// validates the schedule (throws std::logic_error on any violation), and
// computes the report metrics.
RunReport run_replication(const RunConfig& cfg, std::uint64_t seed);

std::vector<std::uint64_t> default_seeds(int count);

struct SweepSpec {
  std::string axis;  // sigma | n_flows | speed | low_speed_pct
  std::vector<double> values;
  std::vector<std::string> schemes;
  int seed_count = 30;
};

std::vector<RunReport> sweep(const RunConfig& base, const SweepSpec& spec);

inline constexpr char kCsvHeader[] =
    "seed,scheme,n_flows,sigma,mobility,vbar_kmh,low_speed_pct,slots_used,"
    "completed,failed,throughput_demand_gbps,throughput_delivered_gbps,"
    "num_groups,wall_ms";

void write_csv(std::ostream& out, const std::vector<RunReport>& rows,
               bool append_means);
void write_graph_csv(std::ostream& out, const std::vector<ContentionEdge>& edges);

}  // namespace vnet
