#ifndef SIMRUN_NET_LINK_H_
#define SIMRUN_NET_LINK_H_

#include <cstdint>

#include "simrun/sim/sim_time.h"

namespace simrun::net {

// One direction of a point-to-point link: a serializer of fixed rate
// followed by a fixed propagation delay.
class Link {
 public:
  Link(int64_t rate_bps, SimTime prop_delay);

  // wire_bytes * 8 / rate, rounded up to the next nanosecond.
  SimTime SerializationTime(uint32_t wire_bytes) const;

  // Store-and-forward: transmission starts at max(now, busy_until) and the
  // last bit reaches the far end after the propagation delay. Returns the
  // delivery time and advances busy_until.
  SimTime Transmit(uint32_t wire_bytes, SimTime now);

  int64_t rate_bps() const { return rate_bps_; }
  SimTime prop_delay() const { return prop_delay_; }
  SimTime busy_until() const { return busy_until_; }
  bool IsIdle(SimTime now) const { return busy_until_ <= now; }

 private:
  int64_t rate_bps_;
  SimTime prop_delay_;
  SimTime busy_until_;
};

}  // namespace simrun::net

#endif  // SIMRUN_NET_LINK_H_
