#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ccnsim/scenario.hpp"
#include "json.hpp"

namespace {

// CCNSIM_LOG=quiet|warn|info|debug (default warn) controls stderr chatter.
int log_level() {
  const char* env = std::getenv("CCNSIM_LOG");
  if (!env) return 1;
  std::string v = env;
  if (v == "quiet") return 0;
  if (v == "warn") return 1;
  if (v == "info") return 2;
  if (v == "debug") return 3;
  return 1;
}

const int g_log = log_level();

void info(const std::string& msg) {
  if (g_log >= 2) std::cerr << "[ccnsim] " << msg << "\n";
}

void debug(const std::string& msg) {
  if (g_log >= 3) std::cerr << "[ccnsim] " << msg << "\n";
}

bool parse_seed_range(const std::string& text, std::uint64_t& lo,
                      std::uint64_t& hi) {
  auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      lo = hi = std::stoull(text);
    } else {
      lo = std::stoull(text.substr(0, dots));
      hi = std::stoull(text.substr(dots + 2));
    }
  } catch (const std::exception&) {
    return false;
  }
  return lo <= hi;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ccnsim: deterministic content-centric network simulator"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "out", grid_path, seeds = "1";
  std::uint64_t seed = 0;
  bool seed_given = false;
  double until_ms = -1;
  bool trace = false;

  CLI::App* run = app.add_subcommand("run", "run one scenario");
  run->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  run->add_option("--seed", seed, "RNG seed (default: scenario's seed)")
      ->each([&](const std::string&) { seed_given = true; });
  run->add_option("--until", until_ms, "override end time (ms)");
  run->add_option("--out", out_dir, "output directory (default: out)");
  run->add_flag("--trace", trace, "write per-event trace.log");

  CLI::App* validate = app.add_subcommand("validate", "check a scenario file");
  validate->add_option("--scenario", scenario_path, "scenario JSON file")
      ->required();

  CLI::App* sweep = app.add_subcommand("sweep", "parameter grid sweep");
  sweep->add_option("--scenario", scenario_path, "base scenario JSON file")
      ->required();
  sweep->add_option("--grid", grid_path, "grid JSON: {\"/json/ptr\": [v …]}")
      ->required();
  sweep->add_option("--seeds", seeds, "seed range a..b (or one seed)");
  sweep->add_option("--out", out_dir, "output directory (default: out)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) {
      ccnsim::Scenario sc = ccnsim::load_scenario(scenario_path);
      std::cout << "ok: " << sc.id << " (t_end " << ccnsim::to_ms(sc.t_end)
                << " ms, seed " << sc.default_seed << ", "
                << ccnsim::scenario_attacks(sc).size() << " attacks)\n";
      return 0;
    }

    if (run->parsed()) {
      ccnsim::Scenario sc = ccnsim::load_scenario(scenario_path);
      if (!seed_given) seed = sc.default_seed;
      if (until_ms > 0) sc.t_end = ccnsim::from_ms(until_ms);
      info("running " + sc.id + " seed " + std::to_string(seed) + " until " +
           std::to_string(ccnsim::to_ms(sc.t_end)) + " ms");
      ccnsim::RunResult res = ccnsim::run_scenario(sc, seed, out_dir, trace);
      info("wrote " + out_dir + "/metrics.csv (" +
           std::to_string(res.metrics.rows().size()) + " rows), " + out_dir +
           "/attack_results.csv (" + std::to_string(res.attack_rows.size()) +
           " rows)");
      return 0;
    }

    // sweep
    std::uint64_t lo = 0, hi = 0;
    if (!parse_seed_range(seeds, lo, hi)) {
      std::cerr << "error: bad --seeds range: " << seeds << "\n";
      return 1;
    }
    ccnsim::Scenario sc = ccnsim::load_scenario(scenario_path);
    std::ifstream gin(grid_path);
    if (!gin) {
      std::cerr << "error: cannot open grid file: " << grid_path << "\n";
      return 1;
    }
    nlohmann::json grid;
    try {
      grid = nlohmann::json::parse(gin);
    } catch (const nlohmann::json::parse_error& e) {
      std::cerr << "error: invalid grid JSON: " << e.what() << "\n";
      return 1;
    }
    debug("sweep over " + std::to_string(grid.size()) + " axes, seeds " +
          std::to_string(lo) + ".." + std::to_string(hi));
    ccnsim::run_sweep(sc, grid, lo, hi, out_dir);
    info("wrote " + out_dir + "/sweep_metrics.csv and sweep_attacks.csv");
    return 0;
  } catch (const ccnsim::ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
