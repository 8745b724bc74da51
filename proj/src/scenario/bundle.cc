#include "simrun/scenario/bundle.h"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "simrun/metrics/csv_io.h"

namespace simrun::scenario {
namespace fs = std::filesystem;

namespace {

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

std::string Sha256Hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(),
                 nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

traffic::WowModel ModelFor(const ScenarioConfig& config) {
  if (config.traffic_file.empty()) return traffic::DefaultQuestingModel();
  return traffic::LoadWowModel(config.traffic_file);
}

void WriteBundle(const Simulation& sim, const std::string& dir) {
  const fs::path root(dir);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw std::runtime_error("cannot create " + dir + ": " + ec.message());

  std::vector<std::string> files;
  auto path = [&](const std::string& name) {
    files.push_back(name);
    return (root / name).string();
  };

  for (const std::string& name : sim.connection_names()) {
    metrics::WriteCwndCsv(path("cwnd_" + name + ".csv"),
                          sim.cwnd(name)->points());
    metrics::WriteDelayCsv(path("delay_" + name + ".csv"),
                           sim.delays(name)->samples());
  }
  metrics::WriteQueueCsv(path("queue_uplink.csv"),
                         sim.queue_trace(net::Direction::kUplink).points());
  metrics::WriteQueueCsv(path("queue_downlink.csv"),
                         sim.queue_trace(net::Direction::kDownlink).points());
  for (const auto& [role, rows] : sim.packet_logs())
    metrics::WritePacketLogCsv(path("packets_" + role + ".csv"), rows);

  const std::string config_text = sim.config().ToJson().dump(2) + "\n";
  WriteText(path("config.json"), config_text);
  WriteText(path("summary.json"), sim.Summary().dump(2) + "\n");

  std::sort(files.begin(), files.end());
  const nlohmann::json manifest = {
      {"tool_version", SIMRUN_VERSION},
      {"seed", sim.config().seed},
      {"config_sha256", Sha256Hex(config_text)},
      {"files", files},
  };
  WriteText(root / "manifest.json", manifest.dump(2) + "\n");
}

nlohmann::json RunScenario(const ScenarioConfig& config,
                           const std::string& out_dir) {
  const traffic::WowModel model = ModelFor(config);
  Simulation sim(config, model);
  sim.Run();
  WriteBundle(sim, out_dir);
  return sim.Summary();
}

unsigned SweepThreads(unsigned fallback) {
  const char* env = std::getenv("SIMRUN_THREADS");
  if (env == nullptr) return fallback;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*env == '\0' || *end != '\0' || v <= 0) return fallback;
  return static_cast<unsigned>(v);
}

std::vector<SweepCell> RunSweep(const ScenarioConfig& base,
                                const std::string& out_dir,
                                unsigned max_threads) {
  if (base.Find(FlowRole::kFtp) == nullptr)
    throw ConfigError("flows: sweep needs an ftp flow");
  std::vector<SweepCell> cells;
  std::vector<ScenarioConfig> configs;
  for (uint32_t buffer : {200u, 20u}) {
    for (tcp::Variant v :
         {tcp::Variant::kSack, tcp::Variant::kNewReno, tcp::Variant::kVegas}) {
      ScenarioConfig c = base;
      c.Find(FlowRole::kFtp)->variant = v;
      c.network.uplink_buffer_pkts = buffer;
      c.Validate();
      const std::string name =
          std::string(tcp::VariantName(v)) + "_" + std::to_string(buffer);
      cells.push_back({v, buffer, (fs::path(out_dir) / name).string(), {}, {}});
      configs.push_back(std::move(c));
    }
  }
  // Loaded once up front so a bad traffic file fails before any run.
  const traffic::WowModel model = ModelFor(base);

  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < cells.size(); i = next++) {
      try {
        Simulation sim(configs[i], model);
        sim.Run();
        WriteBundle(sim, cells[i].dir);
        cells[i].summary = sim.Summary();
      } catch (const std::exception& e) {
        cells[i].error = e.what();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(max_threads, cells.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  bool ok = true;
  for (const SweepCell& c : cells) ok = ok && c.error.empty();
  if (ok) WriteComparisonCsv((fs::path(out_dir) / "comparison.csv").string(),
                             cells);
  return cells;
}

void WriteComparisonCsv(const std::string& path,
                        const std::vector<SweepCell>& cells) {
  std::string text =
      "variant,buffer,wow_mean_delay_s,wow_drops,ftp_goodput_bps\n";
  for (const SweepCell& c : cells) {
    const nlohmann::json& flows = c.summary.at("flows");
    std::string delay = "";
    uint64_t wow_drops = 0;
    if (flows.contains(kWowConn)) {
      const nlohmann::json& d = flows.at(kWowConn).at("queuing_delay");
      if (d.contains("mean_s")) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.9f", d.at("mean_s").get<double>());
        delay = buf;
      }
      wow_drops = flows.at(kWowConn).at("drops").get<uint64_t>() +
                  flows.at(kWowServerConn).at("drops").get<uint64_t>();
    }
    char line[160];
    std::snprintf(line, sizeof line, "%s,%u,%s,%llu,%.3f\n",
                  tcp::VariantName(c.variant), c.buffer_pkts, delay.c_str(),
                  static_cast<unsigned long long>(wow_drops),
                  flows.at(kFtpConn).at("goodput_bps").get<double>());
    text += line;
  }
  WriteText(path, text);
}

}  // namespace simrun::scenario
