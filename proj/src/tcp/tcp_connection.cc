#include "simrun/tcp/tcp_connection.h"

namespace simrun::tcp {

TcpConnection::TcpConnection(std::string name, sim::Kernel& kernel,
                             net::Topology& topo, const Endpoint& endpoint,
                             const SenderConfig& config)
    : name_(std::move(name)),
      kernel_(kernel),
      topo_(topo),
      endpoint_(endpoint),
      sender_(config, endpoint, [&topo] { return topo.NextPacketId(); }),
      receiver_(ReceiverConfig{config.variant == Variant::kSack,
                               config.content_salt.has_value()}) {
  topo_.Bind(endpoint_.dst, endpoint_.flow,
             [this](net::Packet p) { OnDataArrival(std::move(p)); });
  topo_.Bind(endpoint_.src, endpoint_.flow,
             [this](net::Packet p) { OnAckArrival(std::move(p)); });
}

void TcpConnection::Write(uint32_t apdu_bytes) {
  Emit(sender_.OnAppData(apdu_bytes, kernel_.Now()), endpoint_.src);
  SyncTimer();
}

void TcpConnection::Kick() {
  const SimTime now = kernel_.Now();
  if (refill_) refill_(sender_, now);
  Emit(sender_.Poll(now), endpoint_.src);
  SyncTimer();
}

void TcpConnection::Emit(std::vector<net::Packet> packets, net::NodeId from) {
  for (net::Packet& p : packets) {
    if (p.id == 0) p.id = topo_.NextPacketId();
    if (transmit_probe_) transmit_probe_(p, kernel_.Now());
    topo_.Inject(from, std::move(p));
  }
}

void TcpConnection::OnDataArrival(net::Packet seg) {
  net::Packet ack = receiver_.OnData(seg, kernel_.Now());
  ack.id = topo_.NextPacketId();
  std::vector<net::Packet> one;
  one.push_back(std::move(ack));
  Emit(std::move(one), endpoint_.dst);
}

void TcpConnection::OnAckArrival(net::Packet ack) {
  const SimTime now = kernel_.Now();
  Emit(sender_.OnAck(ack, now), endpoint_.src);
  if (refill_) {
    refill_(sender_, now);
    Emit(sender_.Poll(now), endpoint_.src);
  }
  SyncTimer();
}

void TcpConnection::OnTimer() {
  timer_event_.reset();
  timer_at_.reset();
  const SimTime now = kernel_.Now();
  Emit(sender_.OnTimeout(now), endpoint_.src);
  if (refill_) {
    refill_(sender_, now);
    Emit(sender_.Poll(now), endpoint_.src);
  }
  SyncTimer();
}

void TcpConnection::SyncTimer() {
  const std::optional<SimTime> want = sender_.rto_deadline();
  if (want == timer_at_) return;
  if (timer_event_) kernel_.Cancel(*timer_event_);
  timer_event_.reset();
  timer_at_ = want;
  if (want) {
    timer_event_ = kernel_.Schedule(*want, sim::EventKind::kTimerExpiry,
                                    endpoint_.flow, [this] { OnTimer(); });
  }
}

}  // namespace simrun::tcp
