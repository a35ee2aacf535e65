#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vnet/engine.hpp"

namespace {

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  if (out.empty()) throw std::runtime_error("values: empty list");
  return out;
}

std::vector<std::string> parse_schemes(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  if (out.empty()) throw std::runtime_error("schemes: empty list");
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open output file " + path);
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UAV-aided mmWave vehicular network scheduling simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path, scheme, graph_path;
  std::uint64_t seed = 42;
  double sigma = -1.0;
  int oracle_max_flows = -1, oracle_max_slots = -1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "config json path")->required();
    cmd->add_option("--out", out_path, "output csv path")->required();
    cmd->add_option("--seed", seed, "replication seed");
  };

  CLI::App* cmd_run = app.add_subcommand("run", "single replication");
  add_common(cmd_run);
  cmd_run->add_option("--scheme", scheme, "tdma|rr|rcs|jrds|oracle");
  cmd_run->add_option("--sigma", sigma, "interference grouping threshold");
  cmd_run->add_option("--oracle-max-flows", oracle_max_flows, "oracle flow limit");
  cmd_run->add_option("--oracle-max-slots", oracle_max_slots, "oracle horizon limit");
  cmd_run->add_option("--dump-graph", graph_path, "write the contention graph csv");

  std::string axis, values_csv, schemes_csv = "tdma,rr,rcs,jrds";
  int seed_count = 30;
  CLI::App* cmd_sweep = app.add_subcommand("sweep", "axis sweep with per-point means");
  add_common(cmd_sweep);
  cmd_sweep->add_option("--axis", axis, "sigma|n_flows|speed|low_speed_pct")->required();
  cmd_sweep->add_option("--values", values_csv, "comma-separated axis values")->required();
  cmd_sweep->add_option("--schemes", schemes_csv, "comma-separated scheme list");
  cmd_sweep->add_option("--seeds", seed_count, "replications per point");

  CLI::App* cmd_oracle = app.add_subcommand("oracle", "exhaustive minimum-slot run");
  add_common(cmd_oracle);
  cmd_oracle->add_option("--sigma", sigma, "interference grouping threshold");
  cmd_oracle->add_option("--oracle-max-flows", oracle_max_flows, "oracle flow limit");
  cmd_oracle->add_option("--oracle-max-slots", oracle_max_slots, "oracle horizon limit");

  CLI11_PARSE(app, argc, argv);

  try {
    vnet::RunConfig cfg = vnet::load_config(config_path);
    if (sigma > 0.0) cfg.sigma = sigma;
    if (oracle_max_flows > 0) cfg.oracle.max_flows = oracle_max_flows;
    if (oracle_max_slots > 0) cfg.oracle.max_slots = oracle_max_slots;

    if (app.got_subcommand(cmd_run) || app.got_subcommand(cmd_oracle)) {
      if (app.got_subcommand(cmd_oracle))
        cfg.scheme = "oracle";
      else if (!scheme.empty())
        cfg.scheme = scheme;
      vnet::RunReport report = vnet::run_replication(cfg, seed);
      auto f = open_out(out_path);
      vnet::write_csv(f, {report}, false);
      if (!graph_path.empty()) {
        auto g = open_out(graph_path);
        vnet::write_graph_csv(g, report.schedule.graph_edges);
      }
      std::cout << report.scheme << ": " << report.completed << "/" << report.n_flows
                << " flows in " << report.slots_used << " slots, "
                << report.throughput_delivered_gbps << " Gbps delivered\n";
    } else {
      vnet::SweepSpec spec;
      spec.axis = axis;
      spec.values = parse_values(values_csv);
      spec.schemes = parse_schemes(schemes_csv);
      spec.seed_count = seed_count;
      auto rows = vnet::sweep(cfg, spec);
      auto f = open_out(out_path);
      vnet::write_csv(f, rows, true);
      std::cout << "sweep: " << rows.size() << " replications over " << axis << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
