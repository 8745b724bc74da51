#ifndef SIMRUN_TCP_TCP_CONNECTION_H_
#define SIMRUN_TCP_TCP_CONNECTION_H_

#include <functional>
#include <string>

#include "simrun/net/topology.h"
#include "simrun/sim/kernel.h"
#include "simrun/tcp/tcp_receiver.h"
#include "simrun/tcp/tcp_sender.h"

namespace simrun::tcp {

// Binds a sender at one host and a receiver at another to the simulated
// network, and drives the sender's retransmission timer from the kernel.
class TcpConnection {
 public:
  // Every packet this connection puts on the wire, from either end.
  using TransmitProbe = std::function<void(const net::Packet&, SimTime)>;
  // Called before each window poll so bulk sources can top up the buffer.
  using RefillHook = std::function<void(TcpSender&, SimTime)>;

  TcpConnection(std::string name, sim::Kernel& kernel, net::Topology& topo,
                const Endpoint& endpoint, const SenderConfig& config);
  TcpConnection(const TcpConnection&) = delete;
  TcpConnection& operator=(const TcpConnection&) = delete;

  // Application message; segments go out immediately if the window allows.
  void Write(uint32_t apdu_bytes);
  // Re-polls the sender (after a refill hook would add data).
  void Kick();

  const std::string& name() const { return name_; }
  const Endpoint& endpoint() const { return endpoint_; }
  TcpSender& sender() { return sender_; }
  const TcpSender& sender() const { return sender_; }
  TcpReceiver& receiver() { return receiver_; }
  const TcpReceiver& receiver() const { return receiver_; }

  void set_transmit_probe(TransmitProbe probe) {
    transmit_probe_ = std::move(probe);
  }
  void set_refill_hook(RefillHook hook) { refill_ = std::move(hook); }

 private:
  void Emit(std::vector<net::Packet> packets, net::NodeId from);
  void OnDataArrival(net::Packet seg);
  void OnAckArrival(net::Packet ack);
  void OnTimer();
  void SyncTimer();

  std::string name_;
  sim::Kernel& kernel_;
  net::Topology& topo_;
  Endpoint endpoint_;
  TcpSender sender_;
  TcpReceiver receiver_;
  TransmitProbe transmit_probe_;
  RefillHook refill_;
  std::optional<sim::EventId> timer_event_;
  std::optional<SimTime> timer_at_;
};

}  // namespace simrun::tcp

#endif  // SIMRUN_TCP_TCP_CONNECTION_H_
