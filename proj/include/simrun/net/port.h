#ifndef SIMRUN_NET_PORT_H_
#define SIMRUN_NET_PORT_H_

#include <functional>
#include <string>

#include "simrun/net/drop_tail_queue.h"
#include "simrun/net/link.h"
#include "simrun/net/packet.h"
#include "simrun/sim/kernel.h"

namespace simrun::net {

// Egress interface: a drop-tail queue feeding one link direction. The port
// is work conserving: whenever the link goes idle with packets queued, the
// head of line starts transmission at that same instant.
class Port {
 public:
  using DeliverFn = std::function<void(Packet)>;
  // Head-of-line start of transmission; t_enqueued is still set.
  using TxStartProbe = std::function<void(const Packet&, SimTime start)>;
  // Any change of the backlog seen by a newly arriving packet:
  // busy_until of the link and the summed serialization time of the
  // packets waiting behind it.
  using BacklogProbe =
      std::function<void(SimTime now, SimTime busy_until, SimTime queued)>;
  // Fault injection: returning true discards the packet before it reaches
  // the queue. Such losses are counted in injected_drops(), not in the
  // queue counters.
  using DropFilter = std::function<bool(const Packet&)>;

  Port(std::string name, sim::Kernel& kernel, uint32_t id, Link link,
       uint32_t capacity_pkts, NodeId next_hop, DeliverFn deliver);

  // Offers a packet to the queue; returns kDropped on overflow.
  EnqueueResult Send(Packet packet);

  // Wait a packet arriving now would experience before its own
  // transmission begins.
  SimTime VirtualWait(SimTime now) const;

  const std::string& name() const { return name_; }
  NodeId next_hop() const { return next_hop_; }
  const Link& link() const { return link_; }
  DropTailQueue& queue() { return queue_; }
  const DropTailQueue& queue() const { return queue_; }

  void set_tx_start_probe(TxStartProbe probe) {
    tx_start_probe_ = std::move(probe);
  }
  void set_backlog_probe(BacklogProbe probe) {
    backlog_probe_ = std::move(probe);
  }
  void set_drop_filter(DropFilter filter) { drop_filter_ = std::move(filter); }
  uint64_t injected_drops() const { return injected_drops_; }

 private:
  void StartNext();
  void NotifyBacklog() const;

  std::string name_;
  sim::Kernel& kernel_;
  uint32_t id_;
  Link link_;
  DropTailQueue queue_;
  NodeId next_hop_;
  DeliverFn deliver_;
  bool transmitting_ = false;
  SimTime queued_serialization_;
  TxStartProbe tx_start_probe_;
  BacklogProbe backlog_probe_;
  DropFilter drop_filter_;
  uint64_t injected_drops_ = 0;
};

}  // namespace simrun::net

#endif  // SIMRUN_NET_PORT_H_
