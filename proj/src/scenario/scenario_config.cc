#include "simrun/scenario/scenario_config.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

namespace simrun::scenario {
namespace {

using nlohmann::json;

void RejectUnknown(const json& j, const std::string& path,
                   const std::set<std::string>& allowed) {
  for (const auto& [key, _] : j.items()) {
    if (key != "comment" && !allowed.count(key))
      throw ConfigError(path + key + ": unknown key");
  }
}

double Number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path + ": must be finite");
  return v;
}

int64_t Integer(const json& j, const std::string& path) {
  if (!j.is_number_integer())
    throw ConfigError(path + ": expected an integer");
  return j.get<int64_t>();
}

uint32_t Count(const json& j, const std::string& path) {
  const int64_t v = Integer(j, path);
  if (v <= 0 || v > 100000000)
    throw ConfigError(path + ": must be a positive integer");
  return static_cast<uint32_t>(v);
}

int64_t Rate(const json& j, const std::string& path) {
  const int64_t v = Integer(j, path);
  if (v <= 0) throw ConfigError(path + ": must be > 0");
  return v;
}

SimTime Seconds(const json& j, const std::string& path, bool allow_zero) {
  const double v = Number(j, path);
  if (v < 0 || (!allow_zero && v == 0))
    throw ConfigError(path + (allow_zero ? ": must be >= 0" : ": must be > 0"));
  if (v > 1e9) throw ConfigError(path + ": too large");
  return SimTime::Seconds(v);
}

FlowConfig ParseFlow(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  RejectUnknown(j, path + ".",
                {"role", "tcp_variant", "adv_window_segments", "start_s"});
  FlowConfig f;
  if (!j.contains("role") || !j.at("role").is_string())
    throw ConfigError(path + ".role: missing or not a string");
  const std::string role = j.at("role").get<std::string>();
  if (role == "wow") {
    f.role = FlowRole::kWow;
  } else if (role == "ftp") {
    f.role = FlowRole::kFtp;
  } else {
    throw ConfigError(path + ".role: expected \"wow\" or \"ftp\"");
  }
  if (j.contains("tcp_variant")) {
    const json& v = j.at("tcp_variant");
    if (!v.is_string()) throw ConfigError(path + ".tcp_variant: not a string");
    auto parsed = tcp::ParseVariant(v.get<std::string>());
    if (!parsed)
      throw ConfigError(path +
                        ".tcp_variant: expected sack, newreno or vegas");
    f.variant = *parsed;
  }
  if (j.contains("adv_window_segments")) {
    f.adv_window_segments =
        Number(j.at("adv_window_segments"), path + ".adv_window_segments");
  }
  if (j.contains("start_s"))
    f.start = Seconds(j.at("start_s"), path + ".start_s", true);
  return f;
}

TcpTuning ParseTcp(const json& j) {
  if (!j.is_object()) throw ConfigError("tcp: expected an object");
  RejectUnknown(j, "tcp.",
                {"initial_cwnd_segments", "initial_rto_s", "min_rto_s",
                 "dupack_threshold", "vegas_alpha", "vegas_beta",
                 "vegas_gamma"});
  TcpTuning t;
  if (j.contains("initial_cwnd_segments"))
    t.initial_cwnd_segments =
        Number(j.at("initial_cwnd_segments"), "tcp.initial_cwnd_segments");
  if (j.contains("initial_rto_s"))
    t.initial_rto = Seconds(j.at("initial_rto_s"), "tcp.initial_rto_s", false);
  if (j.contains("min_rto_s"))
    t.min_rto = Seconds(j.at("min_rto_s"), "tcp.min_rto_s", false);
  if (j.contains("dupack_threshold"))
    t.dupack_threshold = Count(j.at("dupack_threshold"), "tcp.dupack_threshold");
  if (j.contains("vegas_alpha"))
    t.vegas_alpha = Number(j.at("vegas_alpha"), "tcp.vegas_alpha");
  if (j.contains("vegas_beta"))
    t.vegas_beta = Number(j.at("vegas_beta"), "tcp.vegas_beta");
  if (j.contains("vegas_gamma"))
    t.vegas_gamma = Number(j.at("vegas_gamma"), "tcp.vegas_gamma");
  return t;
}

double Secs(SimTime t) { return t.seconds(); }

}  // namespace

const char* FlowRoleName(FlowRole role) {
  return role == FlowRole::kWow ? "wow" : "ftp";
}

metrics::MeasurementWindow ScenarioConfig::EffectiveWindow() const {
  if (window) return *window;
  const SimTime span = SimTime::FromWholeSeconds(200);
  const SimTime start =
      duration > span ? duration - span : SimTime::Zero();
  return {start, duration};
}

const FlowConfig* ScenarioConfig::Find(FlowRole role) const {
  for (const FlowConfig& f : flows)
    if (f.role == role) return &f;
  return nullptr;
}

FlowConfig* ScenarioConfig::Find(FlowRole role) {
  for (FlowConfig& f : flows)
    if (f.role == role) return &f;
  return nullptr;
}

void ScenarioConfig::Validate() const {
  network.Validate();
  if (duration <= SimTime::Zero())
    throw ConfigError("duration_s: must be > 0");
  const metrics::MeasurementWindow w = EffectiveWindow();
  if (w.start >= w.end)
    throw ConfigError("measurement_window: start must be before end");
  if (w.start >= duration)
    throw ConfigError("measurement_window: start must be before duration_s");
  if (w.end > duration)
    throw ConfigError("measurement_window: end must not exceed duration_s");
  int wow = 0;
  int ftp = 0;
  for (size_t i = 0; i < flows.size(); ++i) {
    const FlowConfig& f = flows[i];
    const std::string path = "flows[" + std::to_string(i) + "]";
    (f.role == FlowRole::kWow ? wow : ftp)++;
    if (f.role == FlowRole::kWow && f.variant != tcp::Variant::kSack)
      throw ConfigError(path + ".tcp_variant: the wow flow always uses sack");
    if (!(f.adv_window_segments >= 1.0))
      throw ConfigError(path + ".adv_window_segments: must be >= 1");
    if (f.start >= duration)
      throw ConfigError(path + ".start_s: must be before duration_s");
  }
  if (wow > 1) throw ConfigError("flows: at most one wow flow");
  if (ftp > 1) throw ConfigError("flows: at most one ftp flow");
  if (!(tcp.initial_cwnd_segments >= 1.0))
    throw ConfigError("tcp.initial_cwnd_segments: must be >= 1");
  if (tcp.min_rto > tcp.initial_rto)
    throw ConfigError("tcp.min_rto_s: must not exceed tcp.initial_rto_s");
  if (!(tcp.vegas_alpha > 0 && tcp.vegas_alpha <= tcp.vegas_beta))
    throw ConfigError("tcp.vegas_alpha: need 0 < vegas_alpha <= vegas_beta");
  if (!(tcp.vegas_gamma > 0))
    throw ConfigError("tcp.vegas_gamma: must be > 0");
}

nlohmann::json ScenarioConfig::ToJson() const {
  json flows_j = json::array();
  for (const FlowConfig& f : flows) {
    flows_j.push_back({{"role", FlowRoleName(f.role)},
                       {"tcp_variant", tcp::VariantName(f.variant)},
                       {"adv_window_segments", f.adv_window_segments},
                       {"start_s", Secs(f.start)}});
  }
  const metrics::MeasurementWindow w = EffectiveWindow();
  return {
      {"uplink_rate_bps", network.uplink_rate_bps},
      {"downlink_rate_bps", network.downlink_rate_bps},
      {"lan_rate_bps", network.lan_rate_bps},
      {"one_way_delay_s", Secs(network.one_way_delay)},
      {"uplink_buffer_pkts", network.uplink_buffer_pkts},
      {"downlink_buffer_pkts", network.downlink_buffer_pkts},
      {"duration_s", Secs(duration)},
      {"measurement_window", {Secs(w.start), Secs(w.end)}},
      {"seed", seed},
      {"flows", flows_j},
      {"traffic_file", traffic_file},
      {"packet_log", packet_log},
      {"tcp",
       {{"initial_cwnd_segments", tcp.initial_cwnd_segments},
        {"initial_rto_s", Secs(tcp.initial_rto)},
        {"min_rto_s", Secs(tcp.min_rto)},
        {"dupack_threshold", tcp.dupack_threshold},
        {"vegas_alpha", tcp.vegas_alpha},
        {"vegas_beta", tcp.vegas_beta},
        {"vegas_gamma", tcp.vegas_gamma}}},
  };
}

ScenarioConfig ParseScenario(const json& j, const std::string& base_dir) {
  if (!j.is_object()) throw ConfigError("scenario: expected a JSON object");
  RejectUnknown(j, "",
                {"uplink_rate_bps", "downlink_rate_bps", "lan_rate_bps",
                 "one_way_delay_s", "uplink_buffer_pkts",
                 "downlink_buffer_pkts", "duration_s", "measurement_window",
                 "seed", "flows", "traffic_file", "packet_log", "tcp"});
  ScenarioConfig c;
  net::DumbbellParams& n = c.network;
  if (j.contains("uplink_rate_bps"))
    n.uplink_rate_bps = Rate(j.at("uplink_rate_bps"), "uplink_rate_bps");
  if (j.contains("downlink_rate_bps"))
    n.downlink_rate_bps = Rate(j.at("downlink_rate_bps"), "downlink_rate_bps");
  if (j.contains("lan_rate_bps"))
    n.lan_rate_bps = Rate(j.at("lan_rate_bps"), "lan_rate_bps");
  if (j.contains("one_way_delay_s"))
    n.one_way_delay =
        Seconds(j.at("one_way_delay_s"), "one_way_delay_s", false);
  if (j.contains("uplink_buffer_pkts"))
    n.uplink_buffer_pkts =
        Count(j.at("uplink_buffer_pkts"), "uplink_buffer_pkts");
  if (j.contains("downlink_buffer_pkts"))
    n.downlink_buffer_pkts =
        Count(j.at("downlink_buffer_pkts"), "downlink_buffer_pkts");
  if (j.contains("duration_s"))
    c.duration = Seconds(j.at("duration_s"), "duration_s", false);
  if (j.contains("measurement_window")) {
    const json& w = j.at("measurement_window");
    if (!w.is_array() || w.size() != 2)
      throw ConfigError("measurement_window: expected [start_s, end_s]");
    c.window = metrics::MeasurementWindow{
        Seconds(w[0], "measurement_window[0]", true),
        Seconds(w[1], "measurement_window[1]", false)};
  }
  if (j.contains("seed")) {
    const json& s = j.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<int64_t>() >= 0))
      throw ConfigError("seed: expected a non-negative integer");
    c.seed = s.get<uint64_t>();
  }
  if (j.contains("flows")) {
    const json& f = j.at("flows");
    if (!f.is_array()) throw ConfigError("flows: expected an array");
    c.flows.clear();
    for (size_t i = 0; i < f.size(); ++i)
      c.flows.push_back(ParseFlow(f[i], "flows[" + std::to_string(i) + "]"));
  }
  if (j.contains("traffic_file")) {
    const json& t = j.at("traffic_file");
    if (!t.is_string()) throw ConfigError("traffic_file: expected a string");
    std::filesystem::path p = t.get<std::string>();
    if (!p.empty() && p.is_relative() && !base_dir.empty())
      p = std::filesystem::path(base_dir) / p;
    c.traffic_file = p.lexically_normal().string();
  }
  if (j.contains("packet_log")) {
    if (!j.at("packet_log").is_boolean())
      throw ConfigError("packet_log: expected true or false");
    c.packet_log = j.at("packet_log").get<bool>();
  }
  if (j.contains("tcp")) c.tcp = ParseTcp(j.at("tcp"));
  c.Validate();
  return c;
}

ScenarioConfig LoadScenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("scenario file '" + path + "': cannot open");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("scenario file '" + path + "': " + e.what());
  }
  return ParseScenario(
      j, std::filesystem::path(path).parent_path().string());
}

}  // namespace simrun::scenario
