#ifndef SIMRUN_SCENARIO_BUNDLE_H_
#define SIMRUN_SCENARIO_BUNDLE_H_

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "simrun/scenario/scenario_config.h"
#include "simrun/scenario/simulation.h"
#include "simrun/traffic/wow_model.h"

namespace simrun::scenario {

// Lowercase hex SHA-256.
std::string Sha256Hex(std::string_view bytes);

// Traffic model named by the config, or the built-in one.
traffic::WowModel ModelFor(const ScenarioConfig& config);

// Writes config.json, summary.json, manifest.json and the CSV series of a
// finished run into `dir` (created if needed). Throws std::runtime_error on
// I/O failure.
void WriteBundle(const Simulation& sim, const std::string& dir);

// Builds, runs and writes one scenario; returns its summary.
nlohmann::json RunScenario(const ScenarioConfig& config,
                           const std::string& out_dir);

struct SweepCell {
  tcp::Variant variant;
  uint32_t buffer_pkts;
  std::string dir;
  nlohmann::json summary;
  std::string error;  // empty on success
};

// Runs {sack, newreno, vegas} x {200, 20} with the base seed into
// <out>/<variant>_<buffer>, at most `max_threads` cells at a time, then
// writes <out>/comparison.csv if every cell succeeded. Cells are returned
// in table order. Throws ConfigError if the base config has no ftp flow.
std::vector<SweepCell> RunSweep(const ScenarioConfig& base,
                                const std::string& out_dir,
                                unsigned max_threads);

// SIMRUN_THREADS if set to a positive integer, else `fallback`.
unsigned SweepThreads(unsigned fallback);

void WriteComparisonCsv(const std::string& path,
                        const std::vector<SweepCell>& cells);

}  // namespace simrun::scenario

#endif  // SIMRUN_SCENARIO_BUNDLE_H_
