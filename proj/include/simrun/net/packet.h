#ifndef SIMRUN_NET_PACKET_H_
#define SIMRUN_NET_PACKET_H_

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "simrun/sim/sim_time.h"

namespace simrun::net {

using NodeId = uint32_t;
using FlowId = uint32_t;

inline constexpr uint32_t kHeaderBytes = 40;
inline constexpr uint32_t kMaxWireBytes = 1500;

enum class Direction : uint8_t { kUplink, kDownlink };

const char* DirectionName(Direction d);

// Half-open byte range [begin, end) of the sequence space.
struct ByteRange {
  uint64_t begin = 0;
  uint64_t end = 0;
  uint64_t size() const { return end - begin; }
  bool operator==(const ByteRange&) const = default;
};

struct TcpHeader {
  uint64_t seq = 0;
  uint64_t ack = 0;
  bool psh = false;
  bool ack_flag = false;
  uint8_t sack_count = 0;
  std::array<ByteRange, 3> sack{};
};

struct Packet {
  uint64_t id = 0;
  FlowId flow = 0;
  Direction direction = Direction::kUplink;
  NodeId src = 0;
  NodeId dst = 0;
  TcpHeader header;
  uint32_t payload_bytes = 0;
  uint32_t wire_bytes = kHeaderBytes;
  SimTime t_created;
  SimTime t_enqueued;
  // Actual payload content, only populated when a connection runs with
  // content tracking enabled (reliability tests). Shared because the
  // content is immutable once sent.
  std::shared_ptr<const std::vector<uint8_t>> body;

  bool is_pure_ack() const { return payload_bytes == 0; }
};

}  // namespace simrun::net

#endif  // SIMRUN_NET_PACKET_H_
