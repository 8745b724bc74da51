#include "simrun/net/link.h"

#include <algorithm>
#include <stdexcept>

#include "simrun/net/packet.h"

namespace simrun::net {

const char* DirectionName(Direction d) {
  return d == Direction::kUplink ? "uplink" : "downlink";
}

Link::Link(int64_t rate_bps, SimTime prop_delay)
    : rate_bps_(rate_bps), prop_delay_(prop_delay) {
  if (rate_bps <= 0) throw std::invalid_argument("link rate must be > 0");
  if (prop_delay < SimTime::Zero())
    throw std::invalid_argument("propagation delay must be >= 0");
}

SimTime Link::SerializationTime(uint32_t wire_bytes) const {
  // 128-bit intermediate: bits * 1e9 overflows 64 bits only for absurd
  // sizes, but the rounding must be exact.
  const unsigned __int128 num =
      static_cast<unsigned __int128>(wire_bytes) * 8u * 1000000000u;
  const unsigned __int128 rate = static_cast<unsigned __int128>(rate_bps_);
  return SimTime::Nanos(static_cast<int64_t>((num + rate - 1) / rate));
}

SimTime Link::Transmit(uint32_t wire_bytes, SimTime now) {
  const SimTime start = std::max(now, busy_until_);
  busy_until_ = start + SerializationTime(wire_bytes);
  return busy_until_ + prop_delay_;
}

}  // namespace simrun::net
