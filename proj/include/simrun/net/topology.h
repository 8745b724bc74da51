#ifndef SIMRUN_NET_TOPOLOGY_H_
#define SIMRUN_NET_TOPOLOGY_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "simrun/config_error.h"
#include "simrun/net/packet.h"
#include "simrun/net/port.h"
#include "simrun/sim/kernel.h"

namespace simrun::net {

// Access network of a two-user home:
//
//   game client --LAN--+                      +--WAN-- game server
//                      home router ==ADSL== ISP router
//   ftp client  --LAN--+                      +--WAN-- ftp server
//
// The ADSL uplink queue sits at the home-router egress and is the
// bottleneck under study.
struct DumbbellParams {
  int64_t uplink_rate_bps = 512000;
  int64_t downlink_rate_bps = 6000000;
  int64_t lan_rate_bps = 100000000;
  // Server-side links; 0 means "same as lan_rate_bps".
  int64_t wan_rate_bps = 0;
  // Client-to-server propagation, split as lan + access + wan.
  SimTime one_way_delay = SimTime::Millis(80);
  SimTime lan_delay = SimTime::Micros(100);
  SimTime access_delay = SimTime::Millis(1);
  uint32_t uplink_buffer_pkts = 200;
  uint32_t downlink_buffer_pkts = 200;
  // Host NICs and WAN interfaces are never the bottleneck.
  uint32_t host_buffer_pkts = 100000;

  // Throws ConfigError naming the offending field.
  void Validate() const;
  SimTime wan_delay() const { return one_way_delay - lan_delay - access_delay; }
};

enum class Role : uint8_t {
  kGameClient,
  kFtpClient,
  kHomeRouter,
  kIspRouter,
  kGameServer,
  kFtpServer,
};

class Topology {
 public:
  using LocalHandler = std::function<void(Packet)>;

  Topology(sim::Kernel& kernel, const DumbbellParams& params);
  Topology(const Topology&) = delete;
  Topology& operator=(const Topology&) = delete;

  NodeId node(Role role) const { return static_cast<NodeId>(role); }
  const std::string& node_name(NodeId id) const { return nodes_[id].name; }
  size_t node_count() const { return nodes_.size(); }

  // Hands a packet to the stack of node `at`: local delivery if it is the
  // destination, otherwise the egress port toward the destination.
  void Inject(NodeId at, Packet packet);

  // Registers the receive handler for packets of `flow` arriving at `host`.
  void Bind(NodeId host, FlowId flow, LocalHandler handler);

  Port& uplink() { return *ports_[uplink_port_]; }
  Port& downlink() { return *ports_[downlink_port_]; }
  const Port& uplink() const { return *ports_[uplink_port_]; }
  const Port& downlink() const { return *ports_[downlink_port_]; }
  // Egress port of `from` toward its neighbour `to`.
  Port& port_between(NodeId from, NodeId to);
  const std::vector<std::unique_ptr<Port>>& ports() const { return ports_; }

  // Sum of propagation delays on the route from `from` to `to`.
  SimTime PathPropagation(NodeId from, NodeId to) const;

  uint64_t NextPacketId() { return next_packet_id_++; }
  const DumbbellParams& params() const { return params_; }
  // Packets that reached a host with no bound handler.
  uint64_t unclaimed() const { return unclaimed_; }

 private:
  struct Node {
    std::string name;
    std::map<NodeId, size_t> egress;  // neighbour -> port index
    std::map<FlowId, LocalHandler> handlers;
  };

  size_t AddPort(const std::string& name, NodeId from, NodeId to,
                 int64_t rate_bps, SimTime delay, uint32_t capacity);
  NodeId NextHop(NodeId at, NodeId dst) const;

  sim::Kernel& kernel_;
  DumbbellParams params_;
  std::vector<Node> nodes_;
  std::vector<std::unique_ptr<Port>> ports_;
  size_t uplink_port_ = 0;
  size_t downlink_port_ = 0;
  uint64_t next_packet_id_ = 1;
  uint64_t unclaimed_ = 0;
};

}  // namespace simrun::net

#endif  // SIMRUN_NET_TOPOLOGY_H_
