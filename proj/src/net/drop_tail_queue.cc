#include "simrun/net/drop_tail_queue.h"

#include <algorithm>
#include <stdexcept>

namespace simrun::net {

DropTailQueue::DropTailQueue(uint32_t capacity_pkts) : capacity_(capacity_pkts) {
  if (capacity_pkts == 0)
    throw std::invalid_argument("queue capacity must be > 0");
}

EnqueueResult DropTailQueue::Enqueue(Packet packet, SimTime now) {
  const bool injected = injector_ && injector_(packet);
  if (injected || fifo_.size() >= capacity_) {
    ++counters_.dropped;
    ++drops_by_flow_[packet.flow];
    Notify(now);
    return EnqueueResult::kDropped;
  }
  packet.t_enqueued = now;
  bytes_ += packet.wire_bytes;
  fifo_.push_back(std::move(packet));
  ++counters_.enqueued;
  counters_.max_occupancy =
      std::max(counters_.max_occupancy, static_cast<uint32_t>(fifo_.size()));
  Notify(now);
  return EnqueueResult::kAccepted;
}

std::optional<Packet> DropTailQueue::Dequeue(SimTime now) {
  if (fifo_.empty()) return std::nullopt;
  Packet p = std::move(fifo_.front());
  fifo_.pop_front();
  bytes_ -= p.wire_bytes;
  ++counters_.dequeued;
  Notify(now);
  return p;
}

uint64_t DropTailQueue::drops_for_flow(FlowId flow) const {
  auto it = drops_by_flow_.find(flow);
  return it == drops_by_flow_.end() ? 0 : it->second;
}

void DropTailQueue::Notify(SimTime now) const {
  if (probe_) probe_(now, occupancy(), bytes_, counters_.dropped);
}

}  // namespace simrun::net
