#include "vnet/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace vnet {

namespace {

using nlohmann::json;

double num_or(const json& j, const std::string& key, const std::string& qual,
              double dflt) {
  if (!j.contains(key)) return dflt;
  const auto& v = j.at(key);
  if (!v.is_number()) throw std::runtime_error("config: " + qual + " must be a number");
  return v.get<double>();
}

int int_or(const json& j, const std::string& key, const std::string& qual, int dflt) {
  if (!j.contains(key)) return dflt;
  const auto& v = j.at(key);
  if (!v.is_number_integer())
    throw std::runtime_error("config: " + qual + " must be an integer");
  return v.get<int>();
}

std::string str_or(const json& j, const std::string& key, const std::string& qual,
                   const std::string& dflt) {
  if (!j.contains(key)) return dflt;
  const auto& v = j.at(key);
  if (!v.is_string()) throw std::runtime_error("config: " + qual + " must be a string");
  return v.get<std::string>();
}

void require(bool ok, const std::string& qual, const std::string& what) {
  if (!ok) throw std::runtime_error("config: " + qual + " " + what);
}

FadingMode parse_fading(const std::string& text, const std::string& qual) {
  if (text == "stochastic") return FadingMode::Stochastic;
  if (text == "deterministic") return FadingMode::Deterministic;
  throw std::runtime_error("config: " + qual +
                           " must be \"stochastic\" or \"deterministic\"");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t tag) {
  return splitmix64(seed + tag * 0x9E3779B97F4A7C15ull);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("config: invalid json: ") + e.what());
  }
  if (!root.is_object()) throw std::runtime_error("config: root must be an object");

  RunConfig cfg;

  if (root.contains("channel")) {
    const auto& c = root.at("channel");
    require(c.is_object(), "channel", "must be an object");
    auto& p = cfg.channel;
    p.carrier_hz = num_or(c, "freq_ghz", "channel.freq_ghz", 30.0) * 1e9;
    require(p.carrier_hz > 0, "channel.freq_ghz", "must be positive");
    p.bandwidth_hz = num_or(c, "bandwidth_mhz", "channel.bandwidth_mhz", 2000.0) * 1e6;
    require(p.bandwidth_hz > 0, "channel.bandwidth_mhz", "must be positive");
    p.noise_dbm_per_mhz = num_or(c, "n0_dbm_per_mhz", "channel.n0_dbm_per_mhz", -134.0);
    p.tx_power_vehicle_w = dbm_to_watts(num_or(c, "pt_dbm", "channel.pt_dbm", 40.0));
    p.tx_power_uav_w = dbm_to_watts(num_or(c, "pu_avg_dbm", "channel.pu_avg_dbm", 30.0));
    p.spectral_efficiency = num_or(c, "eta", "channel.eta", 0.8);
    require(p.spectral_efficiency > 0 && p.spectral_efficiency <= 1.0, "channel.eta",
            "must be in (0, 1]");
    p.nakagami_m = num_or(c, "m", "channel.m", 2.0);
    require(p.nakagami_m >= 0.5, "channel.m", "must be at least 0.5");
    p.rician_k = db_to_linear(num_or(c, "rician_k_db", "channel.rician_k_db", 9.0));
    p.alpha_vehicle = num_or(c, "alpha_v", "channel.alpha_v", 2.5);
    require(p.alpha_vehicle > 0, "channel.alpha_v", "must be positive");
    p.alpha_uav = num_or(c, "alpha_u", "channel.alpha_u", 2.0);
    require(p.alpha_uav > 0, "channel.alpha_u", "must be positive");
    p.self_interference = db_to_linear(num_or(c, "beta_db", "channel.beta_db", -90.0));
    require(p.self_interference >= 1e-11 && p.self_interference <= 1e-7,
            "channel.beta_db", "must lie in [-110, -70]");
    p.boresight_gain_dbi = num_or(c, "g0_dbi", "channel.g0_dbi", 20.0);
    p.beamwidth_deg = num_or(c, "theta3db_deg", "channel.theta3db_deg", 30.0);
    require(p.beamwidth_deg > 0, "channel.theta3db_deg", "must be positive");
    p.fading = parse_fading(str_or(c, "fading", "channel.fading", "stochastic"),
                            "channel.fading");
  }

  if (root.contains("scenario")) {
    const auto& sc = root.at("scenario");
    require(sc.is_object(), "scenario", "must be an object");
    auto& s = cfg.scenario;
    s.road.lanes = int_or(sc, "lanes", "scenario.lanes", 3);
    require(s.road.lanes >= 1, "scenario.lanes", "must be at least 1");
    s.road.lane_width_m = num_or(sc, "lane_width_m", "scenario.lane_width_m", 3.5);
    require(s.road.lane_width_m > 0, "scenario.lane_width_m", "must be positive");
    s.road.length_m = num_or(sc, "road_length_m", "scenario.road_length_m", 6000.0);
    require(s.road.length_m > 0, "scenario.road_length_m", "must be positive");
    s.vehicles_per_lane =
        int_or(sc, "vehicles_per_lane", "scenario.vehicles_per_lane", 60);
    require(s.vehicles_per_lane >= 0, "scenario.vehicles_per_lane",
            "must be nonnegative");
    if (sc.contains("mobility")) {
      const auto& mo = sc.at("mobility");
      require(mo.is_object(), "scenario.mobility", "must be an object");
      std::string kind = str_or(mo, "kind", "scenario.mobility.kind", "pp");
      if (kind == "pp") {
        s.mobility.kind = MobilityModel::Kind::Poisson;
        double v = num_or(mo, "vbar_kmh", "scenario.mobility.vbar_kmh", 100.0);
        require(v > 0, "scenario.mobility.vbar_kmh", "must be positive");
        s.mobility.mean_speed_ms = v / 3.6;
      } else if (kind == "ipp") {
        s.mobility.kind = MobilityModel::Kind::Interrupted;
        double v1 = num_or(mo, "v1_kmh", "scenario.mobility.v1_kmh", 60.0);
        double v2 = num_or(mo, "v2_kmh", "scenario.mobility.v2_kmh", 100.0);
        double pr = num_or(mo, "p", "scenario.mobility.p", 0.5);
        require(v1 > 0, "scenario.mobility.v1_kmh", "must be positive");
        require(v2 > 0, "scenario.mobility.v2_kmh", "must be positive");
        require(pr >= 0 && pr <= 1, "scenario.mobility.p", "must be in [0, 1]");
        s.mobility.low_speed_ms = v1 / 3.6;
        s.mobility.high_speed_ms = v2 / 3.6;
        s.mobility.low_speed_fraction = pr;
        s.mobility.mean_speed_ms = (pr * v1 + (1 - pr) * v2) / 3.6;
      } else {
        throw std::runtime_error("config: scenario.mobility.kind must be \"pp\" or \"ipp\"");
      }
    }
    if (sc.contains("uavs")) {
      const auto& uv = sc.at("uavs");
      require(uv.is_object(), "scenario.uavs", "must be an object");
      auto& u = s.uavs;
      u.count = int_or(uv, "count", "scenario.uavs.count", 5);
      require(u.count >= 0, "scenario.uavs.count", "must be nonnegative");
      u.height_m = num_or(uv, "height_m", "scenario.uavs.height_m", 100.0);
      require(u.height_m > 0, "scenario.uavs.height_m", "must be positive");
      u.speed_ms = num_or(uv, "speed_ms", "scenario.uavs.speed_ms", 20.0);
      require(u.speed_ms >= 0, "scenario.uavs.speed_ms", "must be nonnegative");
      u.orbit_radius_m = num_or(uv, "orbit_radius_m", "scenario.uavs.orbit_radius_m", 100.0);
      require(u.orbit_radius_m >= 0, "scenario.uavs.orbit_radius_m", "must be nonnegative");
      u.coverage_radius_m =
          num_or(uv, "coverage_radius_m", "scenario.uavs.coverage_radius_m", 500.0);
      require(u.coverage_radius_m > 0, "scenario.uavs.coverage_radius_m",
              "must be positive");
      u.tx_power_avg_w = dbm_to_watts(num_or(uv, "p_avg_dbm", "scenario.uavs.p_avg_dbm", 30.0));
      u.tx_power_peak_w = 2.0 * u.tx_power_avg_w;
    }
  }

  if (root.contains("run")) {
    const auto& r = root.at("run");
    require(r.is_object(), "run", "must be an object");
    cfg.n_flows = int_or(r, "n_flows", "run.n_flows", 80);
    require(cfg.n_flows >= 0, "run.n_flows", "must be nonnegative");
    cfg.total_slots = int_or(r, "M", "run.M", 2000);
    require(cfg.total_slots >= 1, "run.M", "must be at least 1");
    cfg.slot_s = num_or(r, "T", "run.T", 0.1);
    require(cfg.slot_s > 0, "run.T", "must be positive");
    cfg.sigma = num_or(r, "sigma", "run.sigma", 1e-3);
    require(cfg.sigma > 0, "run.sigma", "must be positive");
    if (r.contains("demand_gbps")) {
      const auto& d = r.at("demand_gbps");
      require(d.is_array() && d.size() == 2 && d[0].is_number() && d[1].is_number(),
              "run.demand_gbps", "must be a [low, high] pair");
      cfg.demand_low_gbps = d[0].get<double>();
      cfg.demand_high_gbps = d[1].get<double>();
      require(cfg.demand_low_gbps > 0 && cfg.demand_high_gbps >= cfg.demand_low_gbps,
              "run.demand_gbps", "must satisfy 0 < low <= high");
    }
    cfg.scheme = str_or(r, "scheme", "run.scheme", "jrds");
    if (cfg.scheme != "tdma" && cfg.scheme != "rr" && cfg.scheme != "rcs" &&
        cfg.scheme != "jrds" && cfg.scheme != "oracle")
      throw std::runtime_error(
          "config: run.scheme must be one of tdma, rr, rcs, jrds, oracle");
    if (r.contains("fading"))
      cfg.channel.fading =
          parse_fading(str_or(r, "fading", "run.fading", "stochastic"), "run.fading");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<Flow> generate_flows(const ScenarioState& s, const RunConfig& cfg,
                                 std::mt19937_64& rng) {
  double range = v2v_range_m(cfg.channel);
  int V = s.vehicle_count();
  long long eligible = 0;
  for (int i = 0; i < V; ++i) {
    for (int j = i + 1; j < V; ++j) {
      double d = ground_distance(s, i, j);
      if (d > 0.0 && d <= range) eligible += 2;
    }
  }
  if (eligible < cfg.n_flows)
    throw std::runtime_error("flow generation: only " + std::to_string(eligible) +
                             " eligible directed pairs, need " +
                             std::to_string(cfg.n_flows));

  std::vector<Flow> flows;
  std::set<std::pair<int, int>> used;
  std::uniform_int_distribution<int> pick(0, V - 1);
  std::uniform_real_distribution<double> qd(cfg.demand_low_gbps, cfg.demand_high_gbps);
  long long guard = 0;
  while (static_cast<int>(flows.size()) < cfg.n_flows) {
    if (++guard > 50000000LL)
      throw std::runtime_error("flow generation: sampling stalled");
    int a = pick(rng), b = pick(rng);
    if (a == b) continue;
    double d = ground_distance(s, a, b);
    if (d <= 0.0 || d > range) continue;
    if (!used.insert({a, b}).second) continue;
    double q = qd(rng);
    Flow f;
    f.id = static_cast<int>(flows.size());
    f.src = a;
    f.dst = b;
    f.demand_rate_bps = q * 1e9;
    f.demand_bits = q * 1e9 * cfg.total_slots * cfg.slot_s;
    BlockageInfo bi = classify_blockage(s, a, b);
    f.blockage = bi.kind;
    f.blocker = bi.blocker;
    flows.push_back(f);
  }
  return flows;
}

RunReport run_replication(const RunConfig& cfg, std::uint64_t seed) {
  ScenarioState s = generate_scenario(cfg.scenario, sub_seed(seed, 1), cfg.slot_s);
  std::mt19937_64 flow_rng(sub_seed(seed, 2));
  std::vector<Flow> flows = generate_flows(s, cfg, flow_rng);
  std::mt19937_64 scheme_rng(sub_seed(seed, 3));
  RunParams rp{cfg.total_slots, cfg.slot_s, cfg.sigma};

  auto t0 = std::chrono::steady_clock::now();
  ScheduleResult res = run_scheme(cfg.scheme, flows, s, cfg.channel, rp, scheme_rng,
                                  cfg.oracle);
  auto t1 = std::chrono::steady_clock::now();

  auto violations = validate_schedule(res, flows, s);
  if (!violations.empty()) {
    std::string msg = "schedule validation failed:";
    for (std::size_t i = 0; i < violations.size() && i < 3; ++i)
      msg += " [slot " + std::to_string(violations[i].slot) + " " +
             violations[i].kind + ": " + violations[i].detail + "]";
    throw std::logic_error(msg);
  }

  RunReport r;
  r.seed = seed;
  r.scheme = res.scheme;
  r.n_flows = cfg.n_flows;
  r.sigma = cfg.sigma;
  const auto& mo = cfg.scenario.mobility;
  if (mo.kind == MobilityModel::Kind::Poisson) {
    r.mobility = "pp";
    r.vbar_kmh = mo.mean_speed_ms * 3.6;
    r.low_speed_pct = 0.0;
  } else {
    r.mobility = "ipp";
    r.vbar_kmh = (mo.low_speed_fraction * mo.low_speed_ms +
                  (1.0 - mo.low_speed_fraction) * mo.high_speed_ms) *
                 3.6;
    r.low_speed_pct = mo.low_speed_fraction * 100.0;
  }
  r.slots_used = res.slots_used;
  double sum_q_gbps = 0.0, sum_bits = 0.0;
  for (const auto& o : res.outcomes) {
    if (!o.completed) continue;
    ++r.completed;
    sum_q_gbps += flows[o.flow].demand_rate_bps / 1e9;
    sum_bits += flows[o.flow].demand_bits;
  }
  r.failed = static_cast<int>(flows.size()) - r.completed;
  if (res.slots_used > 0) {
    double elapsed = res.slots_used * cfg.slot_s;
    r.throughput_demand_gbps = sum_q_gbps / elapsed;
    r.throughput_delivered_gbps = sum_bits / elapsed / 1e9;
  }
  r.num_groups = static_cast<int>(res.groups.size());
  r.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  r.schedule = std::move(res);
  return r;
}

std::vector<std::uint64_t> default_seeds(int count) {
  std::vector<std::uint64_t> seeds;
  seeds.reserve(count);
  for (int i = 0; i < count; ++i)
    seeds.push_back(i < 30 ? 1001 + i : 100000 + i);
  return seeds;
}

std::vector<RunReport> sweep(const RunConfig& base, const SweepSpec& spec) {
  auto seeds = default_seeds(spec.seed_count);
  std::vector<RunReport> rows;
  for (double v : spec.values) {
    RunConfig cfg = base;
    if (spec.axis == "sigma") {
      cfg.sigma = v;
    } else if (spec.axis == "n_flows") {
      cfg.n_flows = static_cast<int>(std::llround(v));
    } else if (spec.axis == "speed") {
      cfg.scenario.mobility.mean_speed_ms = v / 3.6;
      cfg.scenario.mobility.high_speed_ms = v / 3.6;
    } else if (spec.axis == "low_speed_pct") {
      if (base.scenario.mobility.kind != MobilityModel::Kind::Interrupted)
        throw std::runtime_error("sweep: low_speed_pct axis requires ipp mobility");
      cfg.scenario.mobility.low_speed_fraction = v / 100.0;
    } else {
      throw std::runtime_error("sweep: unknown axis " + spec.axis);
    }
    for (const auto& scheme : spec.schemes) {
      cfg.scheme = scheme;
      for (auto seed : seeds) rows.push_back(run_replication(cfg, seed));
    }
  }
  return rows;
}

namespace {

void write_row(std::ostream& out, const std::string& seed_field, const RunReport& r,
               double slots, double completed, double failed, double thr_p,
               double thr_d, double groups, double wall) {
  out << seed_field << ',' << r.scheme << ',' << r.n_flows << ',' << fmt(r.sigma)
      << ',' << r.mobility << ',' << fmt(r.vbar_kmh) << ',' << fmt(r.low_speed_pct)
      << ',' << fmt(slots) << ',' << fmt(completed) << ',' << fmt(failed) << ','
      << fmt(thr_p) << ',' << fmt(thr_d) << ',' << fmt(groups) << ',' << fmt(wall)
      << '\n';
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<RunReport>& rows,
               bool append_means) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows)
    write_row(out, std::to_string(r.seed), r, r.slots_used, r.completed, r.failed,
              r.throughput_demand_gbps, r.throughput_delivered_gbps, r.num_groups,
              r.wall_ms);
  if (!append_means) return;

  std::vector<std::string> order;
  std::vector<std::pair<const RunReport*, std::vector<const RunReport*>>> groups;
  for (const auto& r : rows) {
    std::string key = r.scheme + '|' + std::to_string(r.n_flows) + '|' + fmt(r.sigma) +
                      '|' + r.mobility + '|' + fmt(r.vbar_kmh) + '|' +
                      fmt(r.low_speed_pct);
    auto it = std::find(order.begin(), order.end(), key);
    if (it == order.end()) {
      order.push_back(key);
      groups.push_back({&r, {}});
      it = order.end() - 1;
    }
    groups[it - order.begin()].second.push_back(&r);
  }
  for (const auto& [rep, members] : groups) {
    double n = static_cast<double>(members.size());
    double slots = 0, comp = 0, fail = 0, thr_p = 0, thr_d = 0, grp = 0, wall = 0;
    for (const auto* m : members) {
      slots += m->slots_used;
      comp += m->completed;
      fail += m->failed;
      thr_p += m->throughput_demand_gbps;
      thr_d += m->throughput_delivered_gbps;
      grp += m->num_groups;
      wall += m->wall_ms;
    }
    write_row(out, "mean", *rep, slots / n, comp / n, fail / n, thr_p / n, thr_d / n,
              grp / n, wall / n);
  }
}

void write_graph_csv(std::ostream& out, const std::vector<ContentionEdge>& edges) {
  out << "flow_i,flow_j,reason\n";
  for (const auto& e : edges)
    out << e.a << ',' << e.b << ',' << edge_reason_name(e.reason) << '\n';
}

}  // namespace vnet
