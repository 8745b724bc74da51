#include "simrun/net/topology.h"

#include <stdexcept>

namespace simrun::net {
namespace {

constexpr NodeId kGameClient = static_cast<NodeId>(Role::kGameClient);
constexpr NodeId kFtpClient = static_cast<NodeId>(Role::kFtpClient);
constexpr NodeId kHomeRouter = static_cast<NodeId>(Role::kHomeRouter);
constexpr NodeId kIspRouter = static_cast<NodeId>(Role::kIspRouter);
constexpr NodeId kGameServer = static_cast<NodeId>(Role::kGameServer);
constexpr NodeId kFtpServer = static_cast<NodeId>(Role::kFtpServer);

bool IsHomeSide(NodeId n) {
  return n == kGameClient || n == kFtpClient || n == kHomeRouter;
}

}  // namespace

void DumbbellParams::Validate() const {
  auto positive = [](int64_t v, const char* key) {
    if (v <= 0) throw ConfigError(std::string(key) + " must be > 0");
  };
  positive(uplink_rate_bps, "uplink_rate_bps");
  positive(downlink_rate_bps, "downlink_rate_bps");
  positive(lan_rate_bps, "lan_rate_bps");
  if (wan_rate_bps < 0) throw ConfigError("wan_rate_bps must be >= 0");
  positive(uplink_buffer_pkts, "uplink_buffer_pkts");
  positive(downlink_buffer_pkts, "downlink_buffer_pkts");
  positive(host_buffer_pkts, "host_buffer_pkts");
  if (lan_delay < SimTime::Zero() || access_delay < SimTime::Zero())
    throw ConfigError("link delays must be >= 0");
  if (wan_delay() < SimTime::Zero())
    throw ConfigError(
        "one_way_delay_s must cover the LAN and access link delays");
}

Topology::Topology(sim::Kernel& kernel, const DumbbellParams& params)
    : kernel_(kernel), params_(params) {
  params_.Validate();
  nodes_ = {{"game_client", {}, {}}, {"ftp_client", {}, {}},
            {"home_router", {}, {}}, {"isp_router", {}, {}},
            {"game_server", {}, {}}, {"ftp_server", {}, {}}};
  const int64_t lan = params_.lan_rate_bps;
  const int64_t wan = params_.wan_rate_bps > 0 ? params_.wan_rate_bps : lan;
  const uint32_t big = params_.host_buffer_pkts;

  for (NodeId host : {kGameClient, kFtpClient}) {
    AddPort(nodes_[host].name + "->home_router", host, kHomeRouter, lan,
            params_.lan_delay, big);
    AddPort("home_router->" + nodes_[host].name, kHomeRouter, host, lan,
            params_.lan_delay, big);
  }
  uplink_port_ = AddPort("uplink", kHomeRouter, kIspRouter,
                         params_.uplink_rate_bps, params_.access_delay,
                         params_.uplink_buffer_pkts);
  downlink_port_ = AddPort("downlink", kIspRouter, kHomeRouter,
                           params_.downlink_rate_bps, params_.access_delay,
                           params_.downlink_buffer_pkts);
  for (NodeId server : {kGameServer, kFtpServer}) {
    AddPort("isp_router->" + nodes_[server].name, kIspRouter, server, wan,
            params_.wan_delay(), big);
    AddPort(nodes_[server].name + "->isp_router", server, kIspRouter, wan,
            params_.wan_delay(), big);
  }
}

size_t Topology::AddPort(const std::string& name, NodeId from, NodeId to,
                         int64_t rate_bps, SimTime delay, uint32_t capacity) {
  const size_t index = ports_.size();
  ports_.push_back(std::make_unique<Port>(
      name, kernel_, static_cast<uint32_t>(index), Link(rate_bps, delay),
      capacity, to, [this, to](Packet p) { Inject(to, std::move(p)); }));
  nodes_[from].egress[to] = index;
  return index;
}

NodeId Topology::NextHop(NodeId at, NodeId dst) const {
  switch (at) {
    case kGameClient:
    case kFtpClient:
      return kHomeRouter;
    case kHomeRouter:
      return IsHomeSide(dst) ? dst : kIspRouter;
    case kIspRouter:
      return IsHomeSide(dst) ? kHomeRouter : dst;
    default:
      return kIspRouter;
  }
}

void Topology::Inject(NodeId at, Packet packet) {
  if (packet.dst == at) {
    auto& handlers = nodes_[at].handlers;
    auto it = handlers.find(packet.flow);
    if (it == handlers.end()) {
      ++unclaimed_;
      return;
    }
    it->second(std::move(packet));
    return;
  }
  ports_[nodes_[at].egress.at(NextHop(at, packet.dst))]->Send(
      std::move(packet));
}

void Topology::Bind(NodeId host, FlowId flow, LocalHandler handler) {
  nodes_.at(host).handlers[flow] = std::move(handler);
}

Port& Topology::port_between(NodeId from, NodeId to) {
  return *ports_[nodes_.at(from).egress.at(to)];
}

SimTime Topology::PathPropagation(NodeId from, NodeId to) const {
  SimTime total;
  NodeId at = from;
  while (at != to) {
    const NodeId next = NextHop(at, to);
    total += ports_[nodes_[at].egress.at(next)]->link().prop_delay();
    at = next;
  }
  return total;
}

}  // namespace simrun::net
