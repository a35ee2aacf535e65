#include "vnet/schedulers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace vnet {

namespace {

constexpr double kCompletionSlack = 1e-9;

bool hop_complete(double bits, double demand) {
  return bits >= demand * (1.0 - kCompletionSlack);
}

struct Progress {
  std::vector<Link> path;
  int relay = -1;
  bool via_relay = false;
  int hop = 0;
  double hop_bits = 0.0;
  bool done = false;
  int completion_slot = -1;
};

// One slot: advance the world, transmit every listed flow's current hop under
// mutual interference, then settle hop handoffs and completions.
std::vector<int> run_slot(ScenarioState& world, int slot_idx,
                          const std::vector<int>& active, std::vector<Progress>& prog,
                          const std::vector<Flow>& flows, const ChannelParams& p,
                          std::mt19937_64* rng, ScheduleResult& out) {
  advance_in_place(world, 1);
  std::vector<ActiveLink> links;
  links.reserve(active.size());
  for (int fi : active)
    links.push_back({flows[fi].id, prog[fi].hop, prog[fi].path[prog[fi].hop]});
  SlotRecord rec;
  rec.slot = slot_idx;
  for (std::size_t k = 0; k < active.size(); ++k) {
    int fi = active[k];
    double r = rate_bps(sinr_at(world, links[k], links, p, rng).sinr, p);
    double bits = r * world.slot_s;
    prog[fi].hop_bits += bits;
    rec.activations.push_back({flows[fi].id, prog[fi].hop, links[k].link, r, bits});
  }
  out.slots.push_back(std::move(rec));
  std::vector<int> completed;
  for (int fi : active) {
    if (!hop_complete(prog[fi].hop_bits, flows[fi].demand_bits)) continue;
    if (prog[fi].hop + 1 < static_cast<int>(prog[fi].path.size())) {
      ++prog[fi].hop;
      prog[fi].hop_bits = 0.0;
    } else {
      prog[fi].done = true;
      prog[fi].completion_slot = slot_idx;
      completed.push_back(fi);
    }
  }
  return completed;
}

void fill_outcomes(const std::vector<Flow>& flows, const std::vector<Progress>& prog,
                   ScheduleResult& out) {
  out.outcomes.clear();
  out.outcomes.reserve(flows.size());
  for (std::size_t i = 0; i < flows.size(); ++i) {
    FlowOutcome o;
    o.flow = flows[i].id;
    o.completed = prog[i].done;
    o.failed = !prog[i].done;
    o.completion_slot = prog[i].completion_slot;
    o.via_relay = prog[i].via_relay;
    o.relay = prog[i].relay;
    if (prog[i].done) {
      o.delivered_bits = flows[i].demand_bits;
    } else if (!prog[i].path.empty() &&
               prog[i].hop + 1 == static_cast<int>(prog[i].path.size())) {
      o.delivered_bits = std::min(flows[i].demand_bits, prog[i].hop_bits);
    }
    out.outcomes.push_back(o);
  }
}

}  // namespace

ScheduleResult run_tdma(const std::vector<Flow>& flows, ScenarioState s,
                        const ChannelParams& p, const RunParams& rp,
                        std::mt19937_64& rng) {
  ScheduleResult out;
  out.scheme = "tdma";
  std::vector<Progress> prog(flows.size());
  int t = 0;
  for (std::size_t i = 0; i < flows.size(); ++i) {
    if (t >= rp.total_slots) break;
    const Flow& f = flows[i];
    if (f.blockage == BlockageCase::Direct) {
      prog[i].path = direct_path(f);
    } else {
      CandidateRelaySet c = build_candidate_set(f, s, p, {}, rp.total_slots);
      if (c.empty()) continue;
      int relay = select_relay(f, c, RelayPolicy::Random, s, ConflictCount(), rng);
      prog[i].path = relay_path(f, relay, s);
      prog[i].relay = relay;
      prog[i].via_relay = true;
    }
    bool transmitted = false;
    while (!prog[i].done && t < rp.total_slots) {
      run_slot(s, t, {static_cast<int>(i)}, prog, flows, p, &rng, out);
      ++t;
      transmitted = true;
    }
    if (transmitted) out.groups.push_back({f.id});
  }
  out.slots_used = t;
  fill_outcomes(flows, prog, out);
  return out;
}

namespace {

ScheduleResult run_grouped(const std::vector<Flow>& flows, ScenarioState s,
                           const ChannelParams& p, const RunParams& rp,
                           std::mt19937_64& rng, bool corridor_candidates,
                           const char* name) {
  ScheduleResult out;
  out.scheme = name;
  std::vector<Progress> prog(flows.size());
  std::vector<int> busy;
  std::vector<Flow> servable;
  std::vector<std::vector<Link>> paths;
  std::vector<int> servable_idx;
  double range = v2v_range_m(p);

  for (std::size_t i = 0; i < flows.size(); ++i) {
    const Flow& f = flows[i];
    if (f.blockage == BlockageCase::Direct) {
      prog[i].path = direct_path(f);
    } else if (corridor_candidates) {
      CandidateRelaySet c = build_candidate_set(f, s, p, busy, rp.total_slots);
      if (c.empty()) continue;
      int relay = select_relay(f, c, RelayPolicy::Random, s, ConflictCount(), rng);
      prog[i].path = relay_path(f, relay, s);
      prog[i].relay = relay;
      prog[i].via_relay = true;
      busy.push_back(relay);
    } else {
      std::vector<int> in_range;
      for (const auto& v : s.vehicles) {
        if (v.id == f.src || v.id == f.dst) continue;
        if (ground_distance(s, f.src, v.id) <= range &&
            ground_distance(s, v.id, f.dst) <= range)
          in_range.push_back(v.id);
      }
      if (in_range.empty()) continue;
      std::uniform_int_distribution<std::size_t> pick(0, in_range.size() - 1);
      int relay = in_range[pick(rng)];
      prog[i].path = relay_path(f, relay, s);
      prog[i].relay = relay;
      prog[i].via_relay = true;
    }
    servable.push_back(f);
    paths.push_back(prog[i].path);
    servable_idx.push_back(static_cast<int>(i));
  }

  ContentionGraph g = build_graph(servable, paths, s, rp.sigma, p);
  out.graph_edges = g.edges;
  auto groups_idx = flow_grouping(g.adj);

  for (const auto& grp : groups_idx) {
    std::vector<int> ids;
    for (int v : grp) ids.push_back(servable[v].id);
    out.groups.push_back(ids);
  }

  int t = 0;
  for (const auto& grp : groups_idx) {
    std::vector<int> act;
    for (int v : grp) act.push_back(servable_idx[v]);
    while (!act.empty() && t < rp.total_slots) {
      auto comp = run_slot(s, t, act, prog, flows, p, &rng, out);
      ++t;
      for (int fi : comp) act.erase(std::remove(act.begin(), act.end(), fi), act.end());
    }
    if (t >= rp.total_slots) break;
  }
  out.slots_used = t;
  fill_outcomes(flows, prog, out);
  return out;
}

}  // namespace

ScheduleResult run_rr(const std::vector<Flow>& flows, ScenarioState s,
                      const ChannelParams& p, const RunParams& rp,
                      std::mt19937_64& rng) {
  return run_grouped(flows, s, p, rp, rng, false, "rr");
}

ScheduleResult run_rcs(const std::vector<Flow>& flows, ScenarioState s,
                       const ChannelParams& p, const RunParams& rp,
                       std::mt19937_64& rng) {
  return run_grouped(flows, s, p, rp, rng, true, "rcs");
}

ScheduleResult run_jrds(const std::vector<Flow>& flows, ScenarioState s,
                        const ChannelParams& p, const RunParams& rp,
                        std::mt19937_64& rng) {
  ScheduleResult out;
  out.scheme = "jrds";
  std::vector<Progress> prog(flows.size());
  std::vector<int> pool_direct, pool_blocked;
  for (std::size_t i = 0; i < flows.size(); ++i) {
    if (flows[i].blockage == BlockageCase::Direct) {
      pool_direct.push_back(static_cast<int>(i));
      prog[i].path = direct_path(flows[i]);
    } else {
      pool_blocked.push_back(static_cast<int>(i));
    }
  }
  std::vector<int> active;
  std::vector<int> busy;

  auto remaining_path = [&](int fi) {
    return std::vector<Link>(prog[fi].path.begin() + prog[fi].hop, prog[fi].path.end());
  };
  auto conflicts_with_active = [&](const std::vector<Link>& path) {
    int c = 0;
    for (int a : active) {
      auto rp_a = remaining_path(a);
      if (paths_conflict(path, rp_a, s, rp.sigma, p, nullptr)) ++c;
    }
    return c;
  };

  // Admits every currently compatible flow: a greedy independent set of the
  // waiting direct flows, then blocked flows whose least-contended candidate
  // relay path collides with nothing active.
  auto regroup = [&]() -> bool {
    bool changed = false;
    std::vector<int> elig;
    for (int fi : pool_direct)
      if (conflicts_with_active(prog[fi].path) == 0) elig.push_back(fi);
    if (!elig.empty()) {
      std::size_t n = elig.size();
      std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (paths_conflict(prog[elig[i]].path, prog[elig[j]].path, s, rp.sigma, p,
                             nullptr))
            adj[i][j] = adj[j][i] = true;
      auto passes = flow_grouping(adj);
      for (int v : passes.front()) {
        int fi = elig[v];
        active.push_back(fi);
        pool_direct.erase(std::remove(pool_direct.begin(), pool_direct.end(), fi),
                          pool_direct.end());
        changed = true;
      }
    }
    std::vector<int> waiting = pool_blocked;
    for (int fi : waiting) {
      CandidateRelaySet c = build_candidate_set(flows[fi], s, p, busy, rp.total_slots);
      if (c.empty()) continue;
      int relay = select_relay(flows[fi], c, RelayPolicy::MinContention, s,
                               conflicts_with_active, rng);
      auto path = relay_path(flows[fi], relay, s);
      if (conflicts_with_active(path) != 0) continue;
      prog[fi].path = path;
      prog[fi].relay = relay;
      prog[fi].via_relay = true;
      prog[fi].hop = 0;
      prog[fi].hop_bits = 0.0;
      busy.push_back(relay);
      active.push_back(fi);
      pool_blocked.erase(std::remove(pool_blocked.begin(), pool_blocked.end(), fi),
                         pool_blocked.end());
      changed = true;
    }
    return changed;
  };

  auto release_relay = [&](int fi) {
    if (prog[fi].via_relay)
      busy.erase(std::remove(busy.begin(), busy.end(), prog[fi].relay), busy.end());
  };

  std::vector<int> last_snap;
  auto snapshot = [&]() {
    std::vector<int> ids;
    for (int fi : active) ids.push_back(flows[fi].id);
    std::sort(ids.begin(), ids.end());
    if (!ids.empty() && ids != last_snap) {
      out.groups.push_back(ids);
      last_snap = ids;
    }
  };

  ChannelParams det = p;
  det.fading = FadingMode::Deterministic;

  int t = 0;
  bool need_regroup = true;
  while (t < rp.total_slots) {
    if (need_regroup) {
      if (regroup()) snapshot();
      need_regroup = false;
    }
    if (active.empty()) break;  // nothing admissible now, and nothing running
    auto comp = run_slot(s, t, active, prog, flows, p, &rng, out);
    ++t;
    bool membership_changed = false;
    for (int fi : comp) {
      release_relay(fi);
      active.erase(std::remove(active.begin(), active.end(), fi), active.end());
      membership_changed = true;
    }
    // A relayed flow still on its first hop whose clean link has dropped below
    // 0 dB goes back to the pool for reselection; its relay frees up.
    for (int fi : std::vector<int>(active.begin(), active.end())) {
      if (!prog[fi].via_relay || prog[fi].hop != 0) continue;
      ActiveLink self{flows[fi].id, 0, prog[fi].path[0]};
      double sinr = sinr_at(s, self, {self}, det, nullptr).sinr;
      if (sinr >= 1.0) continue;
      release_relay(fi);
      active.erase(std::remove(active.begin(), active.end(), fi), active.end());
      prog[fi].path.clear();
      prog[fi].relay = -1;
      prog[fi].via_relay = false;
      prog[fi].hop = 0;
      prog[fi].hop_bits = 0.0;
      pool_blocked.insert(
          std::upper_bound(pool_blocked.begin(), pool_blocked.end(), fi), fi);
      membership_changed = true;
    }
    if (membership_changed || active.empty()) need_regroup = true;
  }
  out.slots_used = t;
  fill_outcomes(flows, prog, out);
  return out;
}

std::vector<Violation> validate_schedule(const ScheduleResult& r,
                                         const std::vector<Flow>& flows,
                                         const ScenarioState& s) {
  std::vector<Violation> out;
  std::unordered_map<int, const Flow*> by_id;
  for (const auto& f : flows) by_id[f.id] = &f;

  for (const auto& rec : r.slots) {
    const auto& acts = rec.activations;
    for (std::size_t i = 0; i < acts.size(); ++i) {
      for (std::size_t j = i + 1; j < acts.size(); ++j) {
        if (acts[i].flow == acts[j].flow) {
          out.push_back({rec.slot, "multi_hop",
                         "flow " + std::to_string(acts[i].flow) +
                             " has two activations in one slot"});
        } else if (adjacent(acts[i].link, acts[j].link, s)) {
          out.push_back({rec.slot, "adjacent_links",
                         "flows " + std::to_string(acts[i].flow) + " and " +
                             std::to_string(acts[j].flow) + " share a node role"});
        }
      }
    }
  }

  std::unordered_map<int, std::vector<std::pair<int, Activation>>> per_flow;
  for (const auto& rec : r.slots)
    for (const auto& a : rec.activations) per_flow[a.flow].push_back({rec.slot, a});

  for (auto& [fid, acts] : per_flow) {
    auto it = by_id.find(fid);
    if (it == by_id.end()) continue;
    const Flow& f = *it->second;
    bool direct_use = false, relayed_use = false;
    int last_h0 = -1, first_h1 = std::numeric_limits<int>::max();
    for (const auto& [slot, a] : acts) {
      bool is_direct = a.link.tx == f.src && a.link.rx == f.dst;
      direct_use = direct_use || is_direct;
      relayed_use = relayed_use || !is_direct;
      if (a.hop == 0) last_h0 = std::max(last_h0, slot);
      if (a.hop == 1) first_h1 = std::min(first_h1, slot);
    }
    if (direct_use && relayed_use)
      out.push_back({-1, "path_exclusive",
                     "flow " + std::to_string(fid) + " mixes direct and relayed hops"});
    if (first_h1 != std::numeric_limits<int>::max() && first_h1 <= last_h0)
      out.push_back({first_h1, "hop_order",
                     "flow " + std::to_string(fid) +
                         " second hop starts before its first hop finished"});
  }
  return out;
}

namespace {

long long slots_needed(double bits, double rate, double slot_s) {
  if (rate <= 0.0) return 1LL << 40;
  double x = bits / (rate * slot_s);
  return static_cast<long long>(std::ceil(x - x * 1e-12));
}

struct OraclePlan {
  int flow_idx = -1;
  std::vector<std::vector<Link>> options;  // candidate paths
  std::vector<int> relays;                 // -1 for direct
};

struct BnB {
  int n = 0;
  int M = 0;
  double slot_s = 0.1;
  const ChannelParams* p = nullptr;
  const std::vector<ScenarioState>* geo = nullptr;
  std::vector<std::vector<Link>> path;  // chosen path per planned flow
  std::vector<double> demand;
  std::vector<std::vector<std::vector<double>>> rmax;  // [flow][hop][t] suffix max
  std::vector<std::array<std::array<bool, 2>, 2>> adj_pair;  // [i*n+j][hi][hj]

  int limit = 0;
  long long nodes_left = 0;
  bool truncated = false;
  std::vector<std::uint64_t> cur, best_masks;
  bool improved = false;

  struct FS {
    int hop = 0;
    double rem = 0.0;
    bool done = false;
  };
  std::vector<FS> st;
  std::unordered_map<std::uint64_t, std::vector<std::vector<double>>> dom;

  std::uint64_t state_key(int t) const {
    std::uint64_t k = static_cast<std::uint64_t>(t);
    for (int i = 0; i < n; ++i)
      k = (k << 2) | (st[i].done ? 3u : static_cast<unsigned>(st[i].hop));
    return k;
  }

  bool dominated_or_store(int t) {
    auto key = state_key(t);
    auto& bucket = dom[key];
    std::vector<double> res(n);
    for (int i = 0; i < n; ++i) res[i] = st[i].done ? 0.0 : st[i].rem;
    for (const auto& r : bucket) {
      bool dom_all = true;
      for (int i = 0; i < n && dom_all; ++i) dom_all = r[i] <= res[i] + 1.0;
      if (dom_all) return true;
    }
    if (dom.size() < 500000 && bucket.size() < 64) bucket.push_back(std::move(res));
    return false;
  }

  void dfs(int t) {
    bool all_done = true;
    for (int i = 0; i < n; ++i) all_done = all_done && st[i].done;
    if (all_done) {
      if (t < limit) {
        limit = t;
        best_masks = cur;
        improved = true;
      }
      return;
    }
    if (t >= M) return;
    if (--nodes_left <= 0) {
      truncated = true;
      return;
    }
    long long lb = 0;
    for (int i = 0; i < n; ++i) {
      if (st[i].done) continue;
      long long si =
          slots_needed(st[i].rem, rmax[i][st[i].hop][t], slot_s);
      if (st[i].hop == 0 && path[i].size() == 2)
        si += slots_needed(demand[i], rmax[i][1][t], slot_s);
      lb = std::max(lb, si);
    }
    if (t + lb >= limit) return;
    if (dominated_or_store(t)) return;

    std::vector<int> alive;
    for (int i = 0; i < n; ++i)
      if (!st[i].done) alive.push_back(i);
    int k = static_cast<int>(alive.size());

    struct Option {
      std::uint64_t mask;
      double total;
      std::vector<double> delivered;  // parallel to alive
    };
    std::vector<Option> opts;
    const ScenarioState& world = (*geo)[t];
    for (std::uint64_t mask = 1; mask < (1ull << k); ++mask) {
      bool ok = true;
      for (int a = 0; a < k && ok; ++a) {
        if (!(mask >> a & 1)) continue;
        for (int b = a + 1; b < k && ok; ++b) {
          if (!(mask >> b & 1)) continue;
          int i = alive[a], j = alive[b];
          ok = !adj_pair[i * n + j][st[i].hop][st[j].hop];
        }
      }
      if (!ok) continue;
      std::vector<ActiveLink> links;
      for (int a = 0; a < k; ++a)
        if (mask >> a & 1)
          links.push_back({alive[a], st[alive[a]].hop, path[alive[a]][st[alive[a]].hop]});
      Option o{mask, 0.0, std::vector<double>(k, 0.0)};
      std::size_t li = 0;
      for (int a = 0; a < k; ++a) {
        if (!(mask >> a & 1)) continue;
        double r = rate_bps(sinr_at(world, links[li], links, *p, nullptr).sinr, *p);
        o.delivered[a] = r * slot_s;
        o.total += o.delivered[a];
        ++li;
      }
      opts.push_back(std::move(o));
    }
    std::sort(opts.begin(), opts.end(),
              [](const Option& x, const Option& y) { return x.total > y.total; });
    opts.push_back({0ull, 0.0, std::vector<double>(k, 0.0)});

    for (const auto& o : opts) {
      std::vector<FS> saved = st;
      for (int a = 0; a < k; ++a) {
        if (!(o.mask >> a & 1)) continue;
        int i = alive[a];
        st[i].rem -= o.delivered[a];
        if (st[i].rem <= demand[i] * kCompletionSlack) {
          if (st[i].hop + 1 < static_cast<int>(path[i].size())) {
            st[i].hop = 1;
            st[i].rem = demand[i];
          } else {
            st[i].done = true;
            st[i].rem = 0.0;
          }
        }
      }
      std::uint64_t full_mask = 0;
      for (int a = 0; a < k; ++a)
        if (o.mask >> a & 1) full_mask |= 1ull << alive[a];
      cur.push_back(full_mask);
      dfs(t + 1);
      cur.pop_back();
      st = saved;
      if (truncated) return;
    }
  }
};

}  // namespace

ScheduleResult run_oracle(const std::vector<Flow>& flows, ScenarioState s,
                          const ChannelParams& p, const RunParams& rp,
                          std::mt19937_64& rng, const OracleLimits& limits) {
  if (static_cast<int>(flows.size()) > limits.max_flows)
    throw std::invalid_argument("oracle: " + std::to_string(flows.size()) +
                                " flows exceeds the limit of " +
                                std::to_string(limits.max_flows));
  if (rp.total_slots > limits.max_slots)
    throw std::invalid_argument("oracle: horizon " + std::to_string(rp.total_slots) +
                                " exceeds the limit of " +
                                std::to_string(limits.max_slots));
  if (p.fading != FadingMode::Deterministic)
    throw std::invalid_argument("oracle: requires deterministic fading");

  ScheduleResult incumbent;
  {
    std::mt19937_64 r1 = rng;
    incumbent = run_jrds(flows, s, p, rp, r1);
    std::mt19937_64 r2 = rng;
    ScheduleResult b = run_rcs(flows, s, p, rp, r2);
    std::mt19937_64 r3 = rng;
    ScheduleResult c = run_tdma(flows, s, p, rp, r3);
    auto better = [](const ScheduleResult& x, const ScheduleResult& y) {
      int cx = 0, cy = 0;
      for (const auto& o : x.outcomes) cx += o.completed ? 1 : 0;
      for (const auto& o : y.outcomes) cy += o.completed ? 1 : 0;
      if (cx != cy) return cx > cy;
      return x.slots_used < y.slots_used;
    };
    if (better(b, incumbent)) incumbent = b;
    if (better(c, incumbent)) incumbent = c;
  }

  int n = static_cast<int>(flows.size());
  int M = rp.total_slots;
  std::vector<ScenarioState> geo;
  geo.reserve(M);
  {
    ScenarioState w = s;
    for (int t = 0; t < M; ++t) {
      advance_in_place(w, 1);
      geo.push_back(w);
    }
  }

  bool exact = true;
  std::vector<OraclePlan> plan;
  std::vector<int> excluded;
  for (int i = 0; i < n; ++i) {
    const Flow& f = flows[i];
    OraclePlan pl;
    pl.flow_idx = i;
    if (f.blockage == BlockageCase::Direct) {
      pl.options.push_back(direct_path(f));
      pl.relays.push_back(-1);
    } else {
      CandidateRelaySet c = build_candidate_set(f, s, p, {}, M);
      if (c.empty()) {
        excluded.push_back(i);
        continue;
      }
      // rank candidates by the weaker of their two clean hop rates
      std::vector<std::pair<double, int>> ranked;
      for (int id : c.all()) {
        auto path = relay_path(f, id, s);
        double worst = std::numeric_limits<double>::max();
        for (std::size_t h = 0; h < path.size(); ++h) {
          ActiveLink self{f.id, static_cast<int>(h), path[h]};
          worst = std::min(worst, rate_bps(sinr_at(s, self, {self}, p, nullptr).sinr, p));
        }
        ranked.push_back({worst, id});
      }
      std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
      });
      if (ranked.size() > 8) {
        ranked.resize(8);
        exact = false;
      }
      for (const auto& [rate, id] : ranked) {
        pl.options.push_back(relay_path(f, id, s));
        pl.relays.push_back(id);
      }
    }
    plan.push_back(std::move(pl));
  }

  int n_plan = static_cast<int>(plan.size());
  int inc_completed = 0;
  for (const auto& o : incumbent.outcomes) inc_completed += o.completed ? 1 : 0;

  struct BestFound {
    int makespan;
    std::vector<int> choice;
    std::vector<std::uint64_t> masks;
    bool valid = false;
  } found{M + 1, {}, {}, false};

  if (inc_completed <= n_plan && n_plan > 0) {
    int limit0 = inc_completed == n_plan ? std::min(incumbent.slots_used, M) : M + 1;

    long long combos = 1;
    for (const auto& pl : plan) {
      combos *= static_cast<long long>(pl.options.size());
      if (combos > 512) break;
    }
    if (combos > 512) exact = false;

    long long nodes_left = limits.node_budget;
    std::vector<int> choice(n_plan, 0);
    long long combo_count = 0;
    bool more = true;
    while (more && combo_count < 512 && nodes_left > 0) {
      ++combo_count;
      BnB b;
      b.n = n_plan;
      b.M = M;
      b.slot_s = rp.slot_s;
      b.p = &p;
      b.geo = &geo;
      b.limit = found.valid ? found.makespan : limit0;
      b.nodes_left = nodes_left;
      b.path.resize(n_plan);
      b.demand.resize(n_plan);
      b.st.resize(n_plan);
      for (int i = 0; i < n_plan; ++i) {
        b.path[i] = plan[i].options[choice[i]];
        b.demand[i] = flows[plan[i].flow_idx].demand_bits;
        b.st[i] = {0, b.demand[i], false};
      }
      b.adj_pair.assign(n_plan * n_plan, {});
      for (int i = 0; i < n_plan; ++i)
        for (int j = 0; j < n_plan; ++j)
          for (std::size_t hi = 0; hi < b.path[i].size(); ++hi)
            for (std::size_t hj = 0; hj < b.path[j].size(); ++hj)
              b.adj_pair[i * n_plan + j][hi][hj] =
                  i != j && adjacent(b.path[i][hi], b.path[j][hj], s);
      b.rmax.assign(n_plan, {});
      for (int i = 0; i < n_plan; ++i) {
        b.rmax[i].assign(b.path[i].size(), std::vector<double>(M, 0.0));
        for (std::size_t h = 0; h < b.path[i].size(); ++h) {
          for (int t = M - 1; t >= 0; --t) {
            ActiveLink self{i, static_cast<int>(h), b.path[i][h]};
            double r = rate_bps(sinr_at(geo[t], self, {self}, p, nullptr).sinr, p);
            b.rmax[i][h][t] = t + 1 < M ? std::max(r, b.rmax[i][h][t + 1]) : r;
          }
        }
      }
      b.dfs(0);
      nodes_left = b.nodes_left;
      if (b.truncated) exact = false;
      if (b.improved) {
        found.makespan = b.limit;
        found.choice = choice;
        found.masks = b.best_masks;
        found.valid = true;
      }
      // odometer over candidate combinations
      int pos = n_plan - 1;
      while (pos >= 0) {
        if (++choice[pos] < static_cast<int>(plan[pos].options.size())) break;
        choice[pos] = 0;
        --pos;
      }
      more = pos >= 0;
    }
    if (nodes_left <= 0) exact = false;
  }

  ScheduleResult out;
  if (!found.valid) {
    out = incumbent;
    out.scheme = "oracle";
    out.oracle_exact = exact;
    return out;
  }

  out.scheme = "oracle";
  out.oracle_exact = exact;
  std::vector<Progress> prog(flows.size());
  std::vector<int> planned_flow(n_plan);
  for (int i = 0; i < n_plan; ++i) {
    int fi = plan[i].flow_idx;
    planned_flow[i] = fi;
    prog[fi].path = plan[i].options[found.choice[i]];
    prog[fi].relay = plan[i].relays[found.choice[i]];
    prog[fi].via_relay = prog[fi].relay >= 0;
  }
  ScenarioState w = s;
  std::uint64_t prev_mask = 0;
  for (std::size_t t = 0; t < found.masks.size(); ++t) {
    std::uint64_t mask = found.masks[t];
    std::vector<int> act;
    for (int i = 0; i < n_plan; ++i)
      if (mask >> i & 1) act.push_back(planned_flow[i]);
    if (mask != prev_mask && mask != 0) {
      std::vector<int> ids;
      for (int fi : act) ids.push_back(flows[fi].id);
      std::sort(ids.begin(), ids.end());
      out.groups.push_back(ids);
    }
    prev_mask = mask;
    if (act.empty()) {
      advance_in_place(w, 1);
      out.slots.push_back({static_cast<int>(t), {}});
      continue;
    }
    run_slot(w, static_cast<int>(t), act, prog, flows, p, nullptr, out);
  }
  out.slots_used = found.makespan;
  fill_outcomes(flows, prog, out);
  return out;
}

ScheduleResult run_scheme(const std::string& scheme, const std::vector<Flow>& flows,
                          const ScenarioState& s, const ChannelParams& p,
                          const RunParams& rp, std::mt19937_64& rng,
                          const OracleLimits& limits) {
  if (scheme == "tdma") return run_tdma(flows, s, p, rp, rng);
  if (scheme == "rr") return run_rr(flows, s, p, rp, rng);
  if (scheme == "rcs") return run_rcs(flows, s, p, rp, rng);
  if (scheme == "jrds") return run_jrds(flows, s, p, rp, rng);
  if (scheme == "oracle") return run_oracle(flows, s, p, rp, rng, limits);
  throw std::invalid_argument("unknown scheme: " + scheme);
}

}  // namespace vnet
