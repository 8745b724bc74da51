#ifndef SIMRUN_TCP_TCP_RECEIVER_H_
#define SIMRUN_TCP_TCP_RECEIVER_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "simrun/net/packet.h"
#include "simrun/sim/sim_time.h"

namespace simrun::tcp {

struct ReceiverConfig {
  bool sack_enabled = true;
  // Reassemble packet bodies into delivered_content().
  bool keep_content = false;
};

// Receiving half of a TCP connection. Every data segment is answered with
// an immediate 40-byte ACK (no delayed ACKs). Out-of-order data is held
// and reported in up to three SACK blocks when SACK is enabled.
class TcpReceiver {
 public:
  // In-order byte range handed to the application, exactly once.
  using DeliveryFn = std::function<void(net::ByteRange)>;

  explicit TcpReceiver(ReceiverConfig config = {});

  // Returns the ACK for `seg`, addressed back to its sender.
  net::Packet OnData(const net::Packet& seg, SimTime now);

  uint64_t rcv_nxt() const { return rcv_nxt_; }
  uint64_t delivered() const { return rcv_nxt_; }
  uint64_t duplicate_segments() const { return duplicates_; }
  // Out-of-order ranges currently held, ascending.
  std::vector<net::ByteRange> out_of_order() const;
  const std::vector<uint8_t>& delivered_content() const { return content_; }
  // Bytes whose body disagreed with previously received data.
  uint64_t content_mismatches() const { return mismatches_; }

  void set_delivery_callback(DeliveryFn fn) { on_delivery_ = std::move(fn); }

 private:
  struct Block {
    uint64_t end;
    uint64_t touched;  // recency for SACK reporting order
  };

  void Insert(uint64_t begin, uint64_t end, uint64_t touch);
  void StoreBody(const net::Packet& seg);
  void DrainContent();

  ReceiverConfig config_;
  uint64_t rcv_nxt_ = 0;
  std::map<uint64_t, Block> ooo_;  // begin -> block, disjoint, above rcv_nxt
  uint64_t touch_counter_ = 0;
  uint64_t duplicates_ = 0;
  DeliveryFn on_delivery_;

  std::map<uint64_t, std::shared_ptr<const std::vector<uint8_t>>> bodies_;
  std::vector<uint8_t> content_;
  uint64_t mismatches_ = 0;
};

}  // namespace simrun::tcp

#endif  // SIMRUN_TCP_TCP_RECEIVER_H_
