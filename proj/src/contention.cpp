#include "vnet/contention.hpp"

#include <algorithm>
#include <limits>

namespace vnet {

bool adjacent(const Link& a, const Link& b, const ScenarioState& s) {
  if (a.tx == b.tx || a.rx == b.rx) return true;
  if (a.tx == b.rx && s.is_uav(a.tx)) return true;
  if (a.rx == b.tx && s.is_uav(a.rx)) return true;
  return false;
}

double relative_interference(const Link& victim, const Link& interferer,
                             const ScenarioState& s, const ChannelParams& p) {
  if (s.is_uav(victim.rx)) return 0.0;
  double desired = rx_power_w(s, victim, p.boresight_gain_dbi, 1.0, p);
  if (interferer.tx == victim.rx)
    return p.tx_power_vehicle_w * p.self_interference / desired;
  bool int_uav = s.is_uav(interferer.tx);
  Link cross{interferer.tx, victim.rx,
             int_uav ? LinkKind::UavToVehicle : LinkKind::VehicleToVehicle};
  double g = antenna_gain_dbi(deviation_deg(s, victim.rx, victim.tx, interferer.tx), p);
  return rx_power_w(s, cross, g, 1.0, p) / desired;
}

int ContentionGraph::degree(int v) const {
  int d = 0;
  for (bool e : adj[v]) d += e ? 1 : 0;
  return d;
}

const char* edge_reason_name(EdgeReason r) {
  switch (r) {
    case EdgeReason::NodeConflict: return "node_conflict";
    case EdgeReason::Duplex: return "duplex";
    case EdgeReason::Interference: return "interference";
    default: return "none";
  }
}

bool links_conflict(const Link& a, const Link& b, const ScenarioState& s, double sigma,
                    const ChannelParams& p, EdgeReason* why) {
  if (adjacent(a, b, s)) {
    if (why)
      *why = (a.tx == b.tx || a.rx == b.rx) ? EdgeReason::NodeConflict : EdgeReason::Duplex;
    return true;
  }
  if (relative_interference(a, b, s, p) > sigma) {
    if (why) *why = EdgeReason::Interference;
    return true;
  }
  if (relative_interference(b, a, s, p) > sigma) {
    if (why) *why = EdgeReason::Interference;
    return true;
  }
  if (why) *why = EdgeReason::None;
  return false;
}

bool paths_conflict(const std::vector<Link>& a, const std::vector<Link>& b,
                    const ScenarioState& s, double sigma, const ChannelParams& p,
                    EdgeReason* why) {
  for (const auto& la : a)
    for (const auto& lb : b)
      if (links_conflict(la, lb, s, sigma, p, why)) return true;
  if (why) *why = EdgeReason::None;
  return false;
}

ContentionGraph build_graph(const std::vector<Flow>& flows,
                            const std::vector<std::vector<Link>>& paths,
                            const ScenarioState& s, double sigma,
                            const ChannelParams& p) {
  ContentionGraph g;
  std::size_t n = flows.size();
  g.paths = paths;
  g.flow_ids.reserve(n);
  for (const auto& f : flows) g.flow_ids.push_back(f.id);
  g.adj.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      EdgeReason why = EdgeReason::None;
      if (paths_conflict(paths[i], paths[j], s, sigma, p, &why)) {
        g.adj[i][j] = g.adj[j][i] = true;
        g.edges.push_back({flows[i].id, flows[j].id, why});
      }
    }
  }
  return g;
}

std::vector<std::vector<int>> flow_grouping(const std::vector<std::vector<bool>>& adj) {
  std::size_t n = adj.size();
  std::vector<std::vector<int>> groups;
  std::vector<bool> remaining(n, true);
  std::size_t left = n;
  while (left > 0) {
    std::vector<bool> elig = remaining;
    std::vector<int> deg(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (!elig[i]) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (elig[j] && adj[i][j]) ++deg[i];
    }
    std::vector<int> group;
    while (true) {
      int pick = -1;
      for (std::size_t i = 0; i < n; ++i) {
        if (!elig[i]) continue;
        if (pick < 0 || deg[i] < deg[pick]) pick = static_cast<int>(i);
      }
      if (pick < 0) break;
      group.push_back(pick);
      std::vector<int> removed{pick};
      for (std::size_t j = 0; j < n; ++j)
        if (elig[j] && adj[pick][j]) removed.push_back(static_cast<int>(j));
      for (int r : removed) elig[r] = false;
      for (int r : removed)
        for (std::size_t j = 0; j < n; ++j)
          if (elig[j] && adj[r][j]) --deg[j];
    }
    for (int v : group) {
      remaining[v] = false;
      --left;
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

std::vector<std::vector<int>> flow_grouping(const ContentionGraph& g) {
  auto idx_groups = flow_grouping(g.adj);
  std::vector<std::vector<int>> out;
  out.reserve(idx_groups.size());
  for (const auto& grp : idx_groups) {
    std::vector<int> ids;
    ids.reserve(grp.size());
    for (int v : grp) ids.push_back(g.flow_ids[v]);
    out.push_back(std::move(ids));
  }
  return out;
}

}  // namespace vnet
