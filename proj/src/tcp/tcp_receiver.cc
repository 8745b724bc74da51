#include "simrun/tcp/tcp_receiver.h"

#include <algorithm>

namespace simrun::tcp {

TcpReceiver::TcpReceiver(ReceiverConfig config) : config_(config) {}

net::Packet TcpReceiver::OnData(const net::Packet& seg, SimTime now) {
  const uint64_t begin = seg.header.seq;
  const uint64_t end = begin + seg.payload_bytes;

  if (end <= rcv_nxt_) {
    ++duplicates_;
  } else {
    if (config_.keep_content) StoreBody(seg);
    const uint64_t touch = ++touch_counter_;
    if (begin <= rcv_nxt_) {
      const uint64_t old = rcv_nxt_;
      rcv_nxt_ = end;
      while (!ooo_.empty() && ooo_.begin()->first <= rcv_nxt_) {
        rcv_nxt_ = std::max(rcv_nxt_, ooo_.begin()->second.end);
        ooo_.erase(ooo_.begin());
      }
      if (config_.keep_content) DrainContent();
      if (on_delivery_) on_delivery_(net::ByteRange{old, rcv_nxt_});
    } else {
      Insert(begin, end, touch);
    }
  }

  net::Packet ack;
  ack.flow = seg.flow;
  ack.direction = seg.direction == net::Direction::kUplink
                      ? net::Direction::kDownlink
                      : net::Direction::kUplink;
  ack.src = seg.dst;
  ack.dst = seg.src;
  ack.header.ack_flag = true;
  ack.header.ack = rcv_nxt_;
  ack.payload_bytes = 0;
  ack.wire_bytes = net::kHeaderBytes;
  ack.t_created = now;

  if (config_.sack_enabled && !ooo_.empty()) {
    // Most recently updated block first; it contains the segment that
    // triggered this ack whenever that segment was out of order.
    std::vector<std::pair<uint64_t, net::ByteRange>> blocks;
    blocks.reserve(ooo_.size());
    for (const auto& [b, block] : ooo_)
      blocks.push_back({block.touched, net::ByteRange{b, block.end}});
    std::sort(blocks.begin(), blocks.end(),
              [](const auto& x, const auto& y) { return x.first > y.first; });
    const size_t n = std::min<size_t>(blocks.size(), ack.header.sack.size());
    for (size_t i = 0; i < n; ++i) ack.header.sack[i] = blocks[i].second;
    ack.header.sack_count = static_cast<uint8_t>(n);
  }
  return ack;
}

void TcpReceiver::Insert(uint64_t begin, uint64_t end, uint64_t touch) {
  auto it = ooo_.upper_bound(begin);
  if (it != ooo_.begin()) {
    auto prev = std::prev(it);
    if (prev->second.end >= begin) {
      begin = prev->first;
      end = std::max(end, prev->second.end);
      ooo_.erase(prev);
    }
  }
  it = ooo_.lower_bound(begin);
  while (it != ooo_.end() && it->first <= end) {
    end = std::max(end, it->second.end);
    it = ooo_.erase(it);
  }
  ooo_[begin] = Block{end, touch};
}

std::vector<net::ByteRange> TcpReceiver::out_of_order() const {
  std::vector<net::ByteRange> out;
  for (const auto& [b, block] : ooo_) out.push_back({b, block.end});
  return out;
}

void TcpReceiver::StoreBody(const net::Packet& seg) {
  if (!seg.body) return;
  auto [it, inserted] = bodies_.try_emplace(seg.header.seq, seg.body);
  if (inserted) return;
  const auto& held = *it->second;
  const auto& fresh = *seg.body;
  const size_t n = std::min(held.size(), fresh.size());
  for (size_t i = 0; i < n; ++i) mismatches_ += held[i] != fresh[i] ? 1 : 0;
  if (fresh.size() > held.size()) it->second = seg.body;
}

void TcpReceiver::DrainContent() {
  while (content_.size() < rcv_nxt_) {
    const uint64_t pos = content_.size();
    auto it = bodies_.upper_bound(pos);
    if (it == bodies_.begin()) break;
    --it;
    const uint64_t key = it->first;
    const auto& body = *it->second;
    if (key + body.size() <= pos) break;  // gap in stored bodies
    const uint64_t stop = std::min<uint64_t>(key + body.size(), rcv_nxt_);
    content_.insert(content_.end(), body.begin() + (pos - key),
                    body.begin() + (stop - key));
  }
  while (!bodies_.empty() &&
         bodies_.begin()->first + bodies_.begin()->second->size() <=
             content_.size()) {
    bodies_.erase(bodies_.begin());
  }
}

}  // namespace simrun::tcp
