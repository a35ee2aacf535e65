#pragma once

#include <string>
#include <vector>

#include "vnet/channel.hpp"
#include "vnet/relay.hpp"
#include "vnet/scenario.hpp"

namespace vnet {

// Hard node conflicts: a vehicle may transmit one flow and receive another
// (full duplex), but never share a role; a UAV (half duplex) conflicts on any
// shared role.
bool adjacent(const Link& a, const Link& b, const ScenarioState& s);

// Interference-to-desired power ratio at the victim's receiver, deterministic
// (unit fading), receiver-side deviation gain for the interferer. Zero when the
// victim receiver is a UAV. When the interferer transmits from the victim's own
// receiver the ratio is the duplex loopback residual over the desired power.
double relative_interference(const Link& victim, const Link& interferer,
                             const ScenarioState& s, const ChannelParams& p);

enum class EdgeReason { None, NodeConflict, Duplex, Interference };

const char* edge_reason_name(EdgeReason r);

// Flow-level conflict: any hop pair adjacent, or relative interference above
// sigma in either defined direction.
bool links_conflict(const Link& a, const Link& b, const ScenarioState& s,
                    double sigma, const ChannelParams& p, EdgeReason* why);
bool paths_conflict(const std::vector<Link>& a, const std::vector<Link>& b,
                    const ScenarioState& s, double sigma, const ChannelParams& p,
                    EdgeReason* why);

struct ContentionEdge {
  int a = -1;  // flow ids
  int b = -1;
  EdgeReason reason = EdgeReason::None;
};

struct ContentionGraph {
  std::vector<int> flow_ids;               // vertex -> flow id
  std::vector<std::vector<Link>> paths;    // vertex -> resolved hops
  std::vector<std::vector<bool>> adj;      // vertex x vertex
  std::vector<ContentionEdge> edges;

  int size() const { return static_cast<int>(flow_ids.size()); }
  int degree(int v) const;
};

ContentionGraph build_graph(const std::vector<Flow>& flows,
                            const std::vector<std::vector<Link>>& paths,
                            const ScenarioState& s, double sigma,
                            const ChannelParams& p);

// Greedy independent-set partition: repeatedly collect the minimum-degree
// vertex (ties to the lowest index), dropping its neighbours for the rest of
// the pass; finished groups leave the graph. Returns groups of vertex indices
// in extraction order.
std::vector<std::vector<int>> flow_grouping(const std::vector<std::vector<bool>>& adj);
std::vector<std::vector<int>> flow_grouping(const ContentionGraph& g);  // flow ids

}  // namespace vnet
