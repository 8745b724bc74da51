#ifndef SIMRUN_NET_DROP_TAIL_QUEUE_H_
#define SIMRUN_NET_DROP_TAIL_QUEUE_H_

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>

#include "simrun/net/packet.h"
#include "simrun/sim/sim_time.h"

namespace simrun::net {

enum class EnqueueResult { kAccepted, kDropped };

struct QueueCounters {
  uint64_t enqueued = 0;
  uint64_t dequeued = 0;
  uint64_t dropped = 0;
  uint32_t max_occupancy = 0;
};

// FIFO with a packet-count limit. The packet currently on the wire is not
// part of the queue.
class DropTailQueue {
 public:
  // Called after every occupancy change (enqueue, dequeue, drop).
  using OccupancyProbe = std::function<void(SimTime now, uint32_t pkts,
                                            uint64_t bytes, uint64_t drops)>;
  // Extra losses injected on arrival (tests only). Returning true drops the
  // packet as if the queue were full.
  using DropInjector = std::function<bool(const Packet&)>;

  explicit DropTailQueue(uint32_t capacity_pkts);

  EnqueueResult Enqueue(Packet packet, SimTime now);
  std::optional<Packet> Dequeue(SimTime now);

  uint32_t capacity() const { return capacity_; }
  uint32_t occupancy() const { return static_cast<uint32_t>(fifo_.size()); }
  uint64_t occupancy_bytes() const { return bytes_; }
  bool empty() const { return fifo_.empty(); }
  const QueueCounters& counters() const { return counters_; }
  uint64_t drops_for_flow(FlowId flow) const;
  const std::map<FlowId, uint64_t>& drops_by_flow() const {
    return drops_by_flow_;
  }

  void set_probe(OccupancyProbe probe) { probe_ = std::move(probe); }
  void set_drop_injector(DropInjector injector) {
    injector_ = std::move(injector);
  }

 private:
  void Notify(SimTime now) const;

  uint32_t capacity_;
  std::deque<Packet> fifo_;
  uint64_t bytes_ = 0;
  QueueCounters counters_;
  std::map<FlowId, uint64_t> drops_by_flow_;
  OccupancyProbe probe_;
  DropInjector injector_;
};

}  // namespace simrun::net

#endif  // SIMRUN_NET_DROP_TAIL_QUEUE_H_
