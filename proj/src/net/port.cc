#include "simrun/net/port.h"

#include <algorithm>

namespace simrun::net {

Port::Port(std::string name, sim::Kernel& kernel, uint32_t id, Link link,
           uint32_t capacity_pkts, NodeId next_hop, DeliverFn deliver)
    : name_(std::move(name)),
      kernel_(kernel),
      id_(id),
      link_(link),
      queue_(capacity_pkts),
      next_hop_(next_hop),
      deliver_(std::move(deliver)) {}

EnqueueResult Port::Send(Packet packet) {
  if (drop_filter_ && drop_filter_(packet)) {
    ++injected_drops_;
    return EnqueueResult::kDropped;
  }
  const SimTime now = kernel_.Now();
  const uint32_t wire = packet.wire_bytes;
  const EnqueueResult result = queue_.Enqueue(std::move(packet), now);
  if (result == EnqueueResult::kAccepted) {
    queued_serialization_ += link_.SerializationTime(wire);
    if (!transmitting_) StartNext();
    NotifyBacklog();
  }
  return result;
}

SimTime Port::VirtualWait(SimTime now) const {
  const SimTime residual = std::max(SimTime::Zero(), link_.busy_until() - now);
  return residual + queued_serialization_;
}

void Port::StartNext() {
  const SimTime now = kernel_.Now();
  std::optional<Packet> next = queue_.Dequeue(now);
  if (!next) {
    transmitting_ = false;
    NotifyBacklog();
    return;
  }
  transmitting_ = true;
  queued_serialization_ -= link_.SerializationTime(next->wire_bytes);
  if (tx_start_probe_) tx_start_probe_(*next, now);
  const SimTime delivery = link_.Transmit(next->wire_bytes, now);
  kernel_.Schedule(delivery, sim::EventKind::kPacketArrival, id_,
                   [this, p = std::move(*next)]() mutable {
                     deliver_(std::move(p));
                   });
  kernel_.Schedule(link_.busy_until(), sim::EventKind::kTransmitComplete, id_,
                   [this] { StartNext(); });
  NotifyBacklog();
}

void Port::NotifyBacklog() const {
  if (backlog_probe_)
    backlog_probe_(kernel_.Now(), link_.busy_until(), queued_serialization_);
}

}  // namespace simrun::net
