// simrun: command-line driver.
//
//   simrun run      --scenario <file> [--seed N] --out <dir>
//                   [--ftp-variant sack|newreno|vegas] [--uplink-buffer N]
//                   [--duration S]
//   simrun sweep    --scenario <file> --out <dir>
//   simrun validate --scenario <file>
//
// Exit status: 0 success, 2 configuration error, 3 runtime error.

#include <cstdio>
#include <functional>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "simrun/config_error.h"
#include "simrun/scenario/bundle.h"
#include "simrun/scenario/scenario_config.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

using simrun::ConfigError;
using simrun::scenario::ScenarioConfig;

struct RunOptions {
  std::string scenario;
  std::string out;
  std::optional<uint64_t> seed;
  std::optional<std::string> ftp_variant;
  std::optional<uint32_t> uplink_buffer;
  std::optional<double> duration;
};

void ApplyOverrides(const RunOptions& o, ScenarioConfig& c) {
  if (o.seed) c.seed = *o.seed;
  if (o.ftp_variant) {
    auto v = simrun::tcp::ParseVariant(*o.ftp_variant);
    if (!v) throw ConfigError("--ftp-variant: expected sack, newreno or vegas");
    auto* ftp = c.Find(simrun::scenario::FlowRole::kFtp);
    if (ftp == nullptr) throw ConfigError("--ftp-variant: scenario has no ftp flow");
    ftp->variant = *v;
  }
  if (o.uplink_buffer) {
    if (*o.uplink_buffer == 0) throw ConfigError("--uplink-buffer: must be > 0");
    c.network.uplink_buffer_pkts = *o.uplink_buffer;
  }
  if (o.duration) {
    if (!(*o.duration > 0)) throw ConfigError("--duration: must be > 0");
    c.duration = simrun::SimTime::Seconds(*o.duration);
  }
  c.Validate();
}

int Guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "runtime error: %s\n", e.what());
    return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-event simulator of game traffic sharing an ADSL "
               "uplink with a bulk TCP upload"};
  app.set_version_flag("--version", SIMRUN_VERSION);
  app.require_subcommand(1);

  RunOptions run;
  CLI::App* run_cmd = app.add_subcommand("run", "Run one scenario");
  run_cmd->add_option("--scenario", run.scenario, "Scenario JSON file")
      ->required();
  run_cmd->add_option("--out", run.out, "Output directory")->required();
  run_cmd->add_option("--seed", run.seed, "Master RNG seed");
  run_cmd->add_option("--ftp-variant", run.ftp_variant,
                      "FTP congestion control: sack, newreno or vegas");
  run_cmd->add_option("--uplink-buffer", run.uplink_buffer,
                      "Uplink queue capacity in packets");
  run_cmd->add_option("--duration", run.duration, "Simulated seconds");

  std::string sweep_scenario, sweep_out;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Run the 3 variant x 2 buffer grid");
  sweep_cmd->add_option("--scenario", sweep_scenario, "Scenario JSON file")
      ->required();
  sweep_cmd->add_option("--out", sweep_out, "Output directory")->required();

  std::string validate_scenario;
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Parse and check a scenario file");
  validate_cmd->add_option("--scenario", validate_scenario,
                           "Scenario JSON file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*run_cmd) {
    return Guarded([&] {
      ScenarioConfig c = simrun::scenario::LoadScenario(run.scenario);
      ApplyOverrides(run, c);
      const auto summary = simrun::scenario::RunScenario(c, run.out);
      std::printf("wrote %s (%llu events)\n", run.out.c_str(),
                  summary["kernel"]["events_processed"].get<unsigned long long>());
      return 0;
    });
  }
  if (*sweep_cmd) {
    return Guarded([&] {
      const ScenarioConfig c = simrun::scenario::LoadScenario(sweep_scenario);
      const auto cells = simrun::scenario::RunSweep(
          c, sweep_out, simrun::scenario::SweepThreads(6));
      int failed = 0;
      for (const auto& cell : cells) {
        if (!cell.error.empty()) {
          std::fprintf(stderr, "cell %s failed: %s\n", cell.dir.c_str(),
                       cell.error.c_str());
          ++failed;
        }
      }
      if (failed) return kExitRuntime;
      std::printf("wrote %zu cells and comparison.csv under %s\n",
                  cells.size(), sweep_out.c_str());
      return 0;
    });
  }
  return Guarded([&] {
    const ScenarioConfig c = simrun::scenario::LoadScenario(validate_scenario);
    std::printf("%s\n", c.ToJson().dump(2).c_str());
    return 0;
  });
}
