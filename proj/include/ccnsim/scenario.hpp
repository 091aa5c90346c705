#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccnsim/attacks.hpp"
#include "ccnsim/engine.hpp"
#include "json.hpp"

namespace ccnsim {

/// Validation failure; `path` is the JSON pointer of the offending value.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct Scenario {
  std::string id;
  std::uint64_t default_seed = 1;
  SimTime t_end = 0;
  SimTime stats_warmup = 0;
  nlohmann::json raw;  // validated document; sweeps patch and re-parse it
};

/// Strict parse: unknown keys, bad types, dangling references, and
/// out-of-range values all throw ScenarioError citing the JSON path.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::string& path);

/// Attack specs of the document, in order (already validated).
std::vector<AttackSpec> scenario_attacks(const Scenario& sc);

std::unique_ptr<Engine> build_engine(const Scenario& sc, std::uint64_t seed);

struct RunResult {
  MetricsTable metrics;
  std::vector<AttackRow> attack_rows;
};

/// Builds and runs; writes metrics.csv / attack_results.csv (and trace.log
/// when tracing) under out_dir unless out_dir is empty.
RunResult run_scenario(const Scenario& sc, std::uint64_t seed,
                       const std::string& out_dir, bool trace);

/// Grid sweep: `grid` maps JSON-pointer strings to arrays of values; every
/// pointer must already exist in the scenario. Runs the Cartesian product of
/// all grid axes for each seed in [seed_lo, seed_hi] and writes
/// sweep_metrics.csv / sweep_attacks.csv (long format with a `cell` column).
void run_sweep(const Scenario& base, const nlohmann::json& grid,
               std::uint64_t seed_lo, std::uint64_t seed_hi,
               const std::string& out_dir);

}  // namespace ccnsim
