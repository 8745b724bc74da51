#ifndef SIMRUN_SCENARIO_SCENARIO_CONFIG_H_
#define SIMRUN_SCENARIO_SCENARIO_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "simrun/config_error.h"
#include "simrun/metrics/summary_stats.h"
#include "simrun/net/topology.h"
#include "simrun/tcp/tcp_config.h"

namespace simrun::scenario {

enum class FlowRole : uint8_t { kWow, kFtp };
const char* FlowRoleName(FlowRole role);

struct FlowConfig {
  FlowRole role = FlowRole::kFtp;
  tcp::Variant variant = tcp::Variant::kSack;
  double adv_window_segments = 64.0;
  SimTime start;
};

// Settings shared by every TCP sender of the scenario.
struct TcpTuning {
  double initial_cwnd_segments = 2.0;
  SimTime initial_rto = SimTime::FromWholeSeconds(1);
  SimTime min_rto = SimTime::Millis(200);
  uint32_t dupack_threshold = 3;
  double vegas_alpha = 1.0;
  double vegas_beta = 3.0;
  double vegas_gamma = 1.0;
};

// Validated experiment description. Field defaults reproduce the
// reference scenario: one WoW flow and one SACK FTP upload sharing a
// 512 kbps / 6 Mbps access link with 80 ms one-way delay for 1000 s.
struct ScenarioConfig {
  net::DumbbellParams network;
  SimTime duration = SimTime::FromWholeSeconds(1000);
  // Unset means the last 200 s of the run (clipped at 0).
  std::optional<metrics::MeasurementWindow> window;
  uint64_t seed = 42;
  std::vector<FlowConfig> flows = {
      {FlowRole::kWow, tcp::Variant::kSack, 64.0, SimTime::Zero()},
      {FlowRole::kFtp, tcp::Variant::kSack, 64.0, SimTime::Zero()}};
  // Empty means the built-in WoW model.
  std::string traffic_file;
  bool packet_log = false;
  TcpTuning tcp;

  metrics::MeasurementWindow EffectiveWindow() const;
  const FlowConfig* Find(FlowRole role) const;
  FlowConfig* Find(FlowRole role);

  // Cross-field checks; throws ConfigError naming the key.
  void Validate() const;
  // Canonical form with every default spelled out. Parsing it back yields
  // an equal config.
  nlohmann::json ToJson() const;
};

// Parses a scenario document. Unknown keys, wrong types and invariant
// violations raise ConfigError with the key path. A relative traffic_file
// is resolved against `base_dir`.
ScenarioConfig ParseScenario(const nlohmann::json& j,
                             const std::string& base_dir = "");
ScenarioConfig LoadScenario(const std::string& path);

}  // namespace simrun::scenario

#endif  // SIMRUN_SCENARIO_SCENARIO_CONFIG_H_
