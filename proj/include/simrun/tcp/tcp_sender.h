#ifndef SIMRUN_TCP_TCP_SENDER_H_
#define SIMRUN_TCP_TCP_SENDER_H_

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <vector>

#include "simrun/net/packet.h"
#include "simrun/sim/sim_time.h"
#include "simrun/tcp/tcp_config.h"

namespace simrun::tcp {

// Addressing stamped on every packet a sender emits.
struct Endpoint {
  net::FlowId flow = 0;
  net::NodeId src = 0;
  net::NodeId dst = 0;
  net::Direction direction = net::Direction::kUplink;
};

struct SenderStats {
  uint64_t segments_sent = 0;
  uint64_t retransmissions = 0;
  uint64_t fast_recoveries = 0;
  uint64_t timeouts = 0;
  uint64_t rtt_samples = 0;
};

// Sending half of a TCP connection with SACK, New Reno or Vegas congestion
// control. The class is a pure state machine: each entry point takes the
// current time and returns the packets to put on the wire. The owner arms
// the retransmission timer from rto_deadline() and calls OnTimeout() when it
// fires.
//
// Sequence space is a 0-based byte offset; connection setup is implicit.
// Segment boundaries are fixed when data is first sent and reused by every
// retransmission.
class TcpSender {
 public:
  using PacketIdSource = std::function<uint64_t()>;
  // (now, cwnd, ssthresh) in segments; called whenever either changes.
  using CwndProbe = std::function<void(SimTime, double, double)>;

  TcpSender(const SenderConfig& config, const Endpoint& endpoint,
            PacketIdSource ids = nullptr);

  // Appends one application message and sends as much as the window allows.
  // The segment carrying the message's last byte has PSH set.
  std::vector<net::Packet> OnAppData(uint32_t apdu_bytes, SimTime now);

  // Appends bytes without message framing (bulk sources). Nothing is sent
  // until Poll().
  void Write(uint64_t bytes);

  // Sends whatever the current window allows.
  std::vector<net::Packet> Poll(SimTime now);

  std::vector<net::Packet> OnAck(const net::Packet& ack, SimTime now);
  std::vector<net::Packet> OnTimeout(SimTime now);

  // Runs one Vegas per-RTT adjustment with the given RTT estimate. Called
  // internally at each epoch boundary; public so it can be driven directly.
  void VegasEpoch(SimTime rtt_sample);

  // New bytes that could be sent right now if they were buffered.
  uint64_t NewDataRoom() const;

  std::optional<SimTime> rto_deadline() const { return rto_deadline_; }
  SimTime CurrentRto() const;

  const SenderConfig& config() const { return config_; }
  Variant variant() const { return config_.variant; }
  Mode mode() const { return mode_; }
  double cwnd() const { return cwnd_; }
  double ssthresh() const { return ssthresh_; }
  uint64_t snd_una() const { return snd_una_; }
  uint64_t snd_nxt() const { return snd_nxt_; }
  uint64_t stream_end() const { return stream_end_; }
  uint64_t unsent_bytes() const { return stream_end_ - snd_nxt_; }
  uint64_t recovery_point() const { return recovery_point_; }
  uint32_t dupacks() const { return dupacks_; }
  uint32_t backoff() const { return backoff_; }
  std::optional<SimTime> srtt() const { return srtt_; }
  SimTime rttvar() const { return rttvar_; }
  std::optional<SimTime> vegas_base_rtt() const { return base_rtt_; }
  bool vegas_in_slow_start() const { return cwnd_ < ssthresh_; }
  const SenderStats& stats() const { return stats_; }
  // Estimated bytes in the network (RFC 6675 pipe).
  uint64_t Pipe() const;
  uint64_t flight_bytes() const { return snd_nxt_ - snd_una_; }
  // True when every written byte has been acknowledged.
  bool idle() const { return snd_una_ == stream_end_; }

  void set_cwnd_probe(CwndProbe probe) { cwnd_probe_ = std::move(probe); }
  void set_vegas_base_rtt(SimTime rtt) { base_rtt_ = rtt; }
  // Emits the current cwnd/ssthresh to the probe unconditionally.
  void ReportCwnd(SimTime now);

 private:
  struct Segment {
    uint64_t seq = 0;
    uint32_t len = 0;
    bool psh = false;
    SimTime sent_at;
    uint32_t transmissions = 0;
    bool sacked = false;
    bool lost = false;
    bool retransmitted = false;
    uint64_t end() const { return seq + len; }
  };

  uint64_t WindowBytes() const;
  bool WindowAllows(uint32_t len) const;
  net::Packet MakePacket(const Segment& seg, SimTime now);
  void Transmit(Segment& seg, SimTime now, std::vector<net::Packet>& out);
  void TrySend(SimTime now, std::vector<net::Packet>& out);
  void ArmTimerIfIdle(SimTime now);
  void RestartTimer(SimTime now);

  void UpdateScoreboard(const net::TcpHeader& h);
  void MarkSackLosses();
  bool FirstSegmentLostBySack() const;
  void EnterFastRecovery(SimTime now, std::vector<net::Packet>& out);
  void OnNewAck(uint64_t ack, SimTime now, std::vector<net::Packet>& out);
  void OnDupAck(SimTime now, std::vector<net::Packet>& out);
  void TakeRttSample(SimTime sample);
  void GrowWindow();
  void VegasOnAck(uint64_t ack);
  void VegasResetEpoch();
  double HalvedFlight() const;
  void SetCwnd(double cwnd);
  void MaybeReport(SimTime now);

  SenderConfig config_;
  Endpoint endpoint_;
  PacketIdSource ids_;
  uint64_t local_ids_ = 1;

  uint64_t stream_end_ = 0;
  std::deque<uint64_t> message_ends_;
  uint64_t snd_una_ = 0;
  uint64_t snd_nxt_ = 0;
  std::deque<Segment> segments_;  // covers [snd_una_, snd_nxt_)

  double cwnd_;
  double ssthresh_;
  uint32_t dupacks_ = 0;
  Mode mode_ = Mode::kOpen;
  uint64_t recovery_point_ = 0;
  // Highest snd_nxt at the start of any recovery; gates re-entry.
  std::optional<uint64_t> recover_;

  std::optional<SimTime> srtt_;
  SimTime rttvar_;
  SimTime rto_;
  uint32_t backoff_ = 1;
  std::optional<SimTime> rto_deadline_;

  // Vegas.
  std::optional<SimTime> base_rtt_;
  uint64_t epoch_end_seq_ = 0;
  std::optional<SimTime> epoch_min_rtt_;
  bool vegas_grow_epoch_ = true;

  SenderStats stats_;
  CwndProbe cwnd_probe_;
  double reported_cwnd_ = -1;
  double reported_ssthresh_ = -1;
};

}  // namespace simrun::tcp

#endif  // SIMRUN_TCP_TCP_SENDER_H_
