#ifndef SIMRUN_SCENARIO_SIMULATION_H_
#define SIMRUN_SCENARIO_SIMULATION_H_

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "simrun/metrics/probes.h"
#include "simrun/net/topology.h"
#include "simrun/scenario/scenario_config.h"
#include "simrun/sim/kernel.h"
#include "simrun/tcp/tcp_connection.h"
#include "simrun/traffic/ftp_source.h"
#include "simrun/traffic/wow_model.h"

namespace simrun::scenario {

// Connection names. A wow flow owns two connections: "wow" carries client
// data on the uplink and "wow_server" carries server data on the downlink.
inline constexpr const char* kWowConn = "wow";
inline constexpr const char* kWowServerConn = "wow_server";
inline constexpr const char* kFtpConn = "ftp";

// One configured run: topology, connections, traffic sources and probes.
class Simulation {
 public:
  Simulation(const ScenarioConfig& config, const traffic::WowModel& model);
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  // Runs the kernel to the configured duration. Call once.
  void Run();

  const ScenarioConfig& config() const { return config_; }
  sim::Kernel& kernel() { return kernel_; }
  net::Topology& topology() { return *topo_; }
  const net::Topology& topology() const { return *topo_; }

  // Connection by name, or nullptr.
  tcp::TcpConnection* connection(const std::string& name);
  const tcp::TcpConnection* connection(const std::string& name) const;
  std::vector<std::string> connection_names() const;

  // Data-packet queuing delays at the bottleneck the connection crosses.
  const metrics::DelayRecorder* delays(const std::string& conn) const;
  const metrics::CwndTrace* cwnd(const std::string& conn) const;
  const metrics::QueueTrace& queue_trace(net::Direction d) const;
  double virtual_delay_mean(net::Direction d) const;
  // Packets of a flow as they leave their sending host, keyed by role
  // name; empty unless packet_log is enabled.
  const std::map<std::string, std::vector<metrics::PacketRecord>>&
  packet_logs() const {
    return packet_logs_;
  }

  // Cumulative bytes acked by a connection at the window start.
  uint64_t acked_at_window_start(const std::string& conn) const;
  // Drops of the connection's packets (data and ACKs) at any queue.
  uint64_t drops(const std::string& conn) const;

  nlohmann::json Summary() const;

 private:
  struct Conn {
    std::unique_ptr<tcp::TcpConnection> tcp;
    std::string role;
    metrics::DelayRecorder delays;
    metrics::CwndTrace cwnd;
    uint64_t acked_at_window_start = 0;
  };

  void AddConnection(const std::string& name, const std::string& role,
                     net::NodeId src, net::NodeId dst, net::Direction dir,
                     const FlowConfig& flow);
  void ScheduleApdu(Conn& conn, traffic::WowGenerator& gen, SimTime at);
  void AttachPortProbes(net::Port& port, metrics::QueueTrace& trace,
                        metrics::VirtualDelayIntegrator& integrator);
  Conn* FindByFlow(net::FlowId flow);

  ScenarioConfig config_;
  metrics::MeasurementWindow window_;
  sim::Kernel kernel_;
  std::unique_ptr<net::Topology> topo_;
  std::map<std::string, Conn> conns_;
  std::map<net::FlowId, std::string> flow_names_;
  std::vector<std::unique_ptr<traffic::WowGenerator>> generators_;
  std::unique_ptr<traffic::FtpSource> ftp_;
  metrics::QueueTrace uplink_trace_;
  metrics::QueueTrace downlink_trace_;
  metrics::VirtualDelayIntegrator uplink_virtual_;
  metrics::VirtualDelayIntegrator downlink_virtual_;
  std::map<std::string, std::vector<metrics::PacketRecord>> packet_logs_;
  bool ran_ = false;
};

}  // namespace simrun::scenario

#endif  // SIMRUN_SCENARIO_SIMULATION_H_
