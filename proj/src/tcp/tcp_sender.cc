#include "simrun/tcp/tcp_sender.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace simrun::tcp {

const char* VariantName(Variant v) {
  switch (v) {
    case Variant::kSack:
      return "sack";
    case Variant::kNewReno:
      return "newreno";
    case Variant::kVegas:
      return "vegas";
  }
  return "?";
}

std::optional<Variant> ParseVariant(std::string_view name) {
  if (name == "sack") return Variant::kSack;
  if (name == "newreno") return Variant::kNewReno;
  if (name == "vegas") return Variant::kVegas;
  return std::nullopt;
}

const char* ModeName(Mode m) {
  switch (m) {
    case Mode::kOpen:
      return "open";
    case Mode::kFastRecovery:
      return "fast-recovery";
    case Mode::kRtoRecovery:
      return "rto-recovery";
  }
  return "?";
}

uint8_t StreamByte(uint64_t salt, uint64_t offset) {
  // splitmix64 finalizer
  uint64_t z = salt + offset * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return static_cast<uint8_t>(z ^ (z >> 31));
}

TcpSender::TcpSender(const SenderConfig& config, const Endpoint& endpoint,
                     PacketIdSource ids)
    : config_(config),
      endpoint_(endpoint),
      ids_(std::move(ids)),
      cwnd_(std::max(1.0, config.initial_cwnd)),
      ssthresh_(config.initial_ssthresh > 0 ? config.initial_ssthresh
                                            : config.adv_window),
      rto_(config.initial_rto) {
  if (config.mss == 0) throw std::invalid_argument("mss must be > 0");
  if (config.adv_window < 1) throw std::invalid_argument("adv_window < 1");
}

std::vector<net::Packet> TcpSender::OnAppData(uint32_t apdu_bytes,
                                              SimTime now) {
  std::vector<net::Packet> out;
  if (apdu_bytes == 0) return out;
  stream_end_ += apdu_bytes;
  message_ends_.push_back(stream_end_);
  TrySend(now, out);
  MaybeReport(now);
  return out;
}

void TcpSender::Write(uint64_t bytes) { stream_end_ += bytes; }

std::vector<net::Packet> TcpSender::Poll(SimTime now) {
  std::vector<net::Packet> out;
  TrySend(now, out);
  MaybeReport(now);
  return out;
}

uint64_t TcpSender::WindowBytes() const {
  const double segments = std::min(cwnd_, config_.adv_window);
  return static_cast<uint64_t>(std::floor(segments * config_.mss));
}

bool TcpSender::WindowAllows(uint32_t len) const {
  return Pipe() + len <= WindowBytes();
}

uint64_t TcpSender::Pipe() const {
  uint64_t pipe = 0;
  for (const Segment& s : segments_) {
    if (s.sacked) continue;
    if (!s.lost) pipe += s.len;
    if (s.retransmitted) pipe += s.len;
  }
  return pipe;
}

uint64_t TcpSender::NewDataRoom() const {
  uint64_t committed = Pipe();
  for (const Segment& s : segments_)
    if (s.lost && !s.retransmitted && !s.sacked) committed += s.len;
  const uint64_t window = WindowBytes();
  const uint64_t by_cwnd = window > committed ? window - committed : 0;
  const auto adv_bytes = static_cast<uint64_t>(
      std::floor(config_.adv_window * config_.mss));
  const uint64_t outstanding = snd_nxt_ - snd_una_;
  const uint64_t by_adv = adv_bytes > outstanding ? adv_bytes - outstanding : 0;
  return std::min(by_cwnd, by_adv);
}

net::Packet TcpSender::MakePacket(const Segment& seg, SimTime now) {
  net::Packet p;
  p.id = ids_ ? ids_() : local_ids_++;
  p.flow = endpoint_.flow;
  p.direction = endpoint_.direction;
  p.src = endpoint_.src;
  p.dst = endpoint_.dst;
  p.header.seq = seg.seq;
  p.header.psh = seg.psh;
  p.payload_bytes = seg.len;
  p.wire_bytes = seg.len + net::kHeaderBytes;
  p.t_created = now;
  if (config_.content_salt) {
    auto body = std::make_shared<std::vector<uint8_t>>(seg.len);
    for (uint32_t i = 0; i < seg.len; ++i)
      (*body)[i] = StreamByte(*config_.content_salt, seg.seq + i);
    p.body = std::move(body);
  }
  return p;
}

void TcpSender::Transmit(Segment& seg, SimTime now,
                         std::vector<net::Packet>& out) {
  seg.sent_at = now;
  if (++seg.transmissions > 1) {
    seg.retransmitted = true;
    ++stats_.retransmissions;
  }
  ++stats_.segments_sent;
  out.push_back(MakePacket(seg, now));
}

void TcpSender::TrySend(SimTime now, std::vector<net::Packet>& out) {
  const size_t before = out.size();
  const auto adv_bytes =
      static_cast<uint64_t>(std::floor(config_.adv_window * config_.mss));
  for (;;) {
    auto rtx = std::find_if(segments_.begin(), segments_.end(),
                            [](const Segment& s) {
                              return s.lost && !s.retransmitted && !s.sacked;
                            });
    if (rtx != segments_.end()) {
      if (!WindowAllows(rtx->len)) break;
      Transmit(*rtx, now, out);
      continue;
    }
    if (snd_nxt_ == stream_end_) break;
    const auto len = static_cast<uint32_t>(
        std::min<uint64_t>(config_.mss, stream_end_ - snd_nxt_));
    if (!WindowAllows(len)) break;
    if (snd_nxt_ + len - snd_una_ > adv_bytes) break;

    Segment seg;
    seg.seq = snd_nxt_;
    seg.len = len;
    while (!message_ends_.empty() && message_ends_.front() <= seg.seq)
      message_ends_.pop_front();
    while (!message_ends_.empty() && message_ends_.front() <= seg.end()) {
      seg.psh = true;
      message_ends_.pop_front();
    }
    snd_nxt_ += len;
    segments_.push_back(seg);
    Transmit(segments_.back(), now, out);
  }
  if (out.size() > before) ArmTimerIfIdle(now);
}

void TcpSender::ArmTimerIfIdle(SimTime now) {
  if (!rto_deadline_ && snd_nxt_ > snd_una_) RestartTimer(now);
}

void TcpSender::RestartTimer(SimTime now) {
  rto_deadline_ = now + CurrentRto();
}

SimTime TcpSender::CurrentRto() const {
  const SimTime backed = rto_ * static_cast<int64_t>(backoff_);
  return std::min(backed, config_.max_rto);
}

std::vector<net::Packet> TcpSender::OnAck(const net::Packet& ack,
                                          SimTime now) {
  std::vector<net::Packet> out;
  if (!ack.header.ack_flag) return out;
  const uint64_t a = ack.header.ack;
  if (a > snd_nxt_ || a < snd_una_) return out;

  if (config_.variant == Variant::kSack) UpdateScoreboard(ack.header);
  if (a > snd_una_) {
    OnNewAck(a, now, out);
  } else if (snd_nxt_ > snd_una_) {
    OnDupAck(now, out);
  }
  TrySend(now, out);
  MaybeReport(now);
  return out;
}

void TcpSender::UpdateScoreboard(const net::TcpHeader& h) {
  for (uint8_t i = 0; i < h.sack_count; ++i) {
    const net::ByteRange& block = h.sack[i];
    for (Segment& s : segments_) {
      if (s.seq >= block.end) break;
      if (s.seq >= block.begin && s.end() <= block.end) s.sacked = true;
    }
  }
}

void TcpSender::MarkSackLosses() {
  uint32_t sacked_above = 0;
  for (auto it = segments_.rbegin(); it != segments_.rend(); ++it) {
    if (it->sacked) {
      ++sacked_above;
    } else if (sacked_above >= config_.dupack_threshold) {
      it->lost = true;
    }
  }
}

bool TcpSender::FirstSegmentLostBySack() const {
  uint32_t sacked = 0;
  for (const Segment& s : segments_) sacked += s.sacked ? 1 : 0;
  return sacked >= config_.dupack_threshold;
}

void TcpSender::OnNewAck(uint64_t ack, SimTime now,
                         std::vector<net::Packet>& out) {
  const uint64_t acked = ack - snd_una_;
  bool any_retransmitted = false;
  bool popped = false;
  SimTime last_sent;
  while (!segments_.empty() && segments_.front().end() <= ack) {
    const Segment& s = segments_.front();
    any_retransmitted |= s.transmissions > 1;
    last_sent = s.sent_at;
    popped = true;
    segments_.pop_front();
  }
  if (!segments_.empty() && segments_.front().seq < ack) {
    // Ack inside a segment; only possible if a peer acks odd boundaries.
    Segment& s = segments_.front();
    any_retransmitted |= s.transmissions > 1;
    s.len -= static_cast<uint32_t>(ack - s.seq);
    s.seq = ack;
  }
  snd_una_ = ack;
  dupacks_ = 0;

  // Karn: never sample an ack that covers retransmitted data.
  if (popped && !any_retransmitted) TakeRttSample(now - last_sent);

  switch (mode_) {
    case Mode::kFastRecovery:
      if (ack >= recovery_point_) {
        mode_ = Mode::kOpen;
        SetCwnd(ssthresh_);
        for (Segment& s : segments_)
          if (!s.retransmitted) s.lost = false;
        if (config_.variant == Variant::kVegas) VegasResetEpoch();
      } else if (config_.variant == Variant::kSack) {
        MarkSackLosses();
      } else {
        // Partial ack: deflate by the amount acked, add back one segment
        // if at least a full one was acked, and resend the next hole.
        double deflated = cwnd_ - static_cast<double>(acked) / config_.mss;
        if (acked >= config_.mss) deflated += 1.0;
        SetCwnd(deflated);
        if (!segments_.empty()) {
          Segment& next = segments_.front();
          next.lost = true;
          Transmit(next, now, out);
        }
      }
      break;
    case Mode::kRtoRecovery:
      GrowWindow();
      if (config_.variant == Variant::kVegas) VegasOnAck(ack);
      if (ack >= recovery_point_) mode_ = Mode::kOpen;
      break;
    case Mode::kOpen:
      GrowWindow();
      if (config_.variant == Variant::kVegas) VegasOnAck(ack);
      break;
  }

  if (snd_una_ == snd_nxt_) {
    rto_deadline_.reset();
  } else {
    RestartTimer(now);
  }
}

void TcpSender::OnDupAck(SimTime now, std::vector<net::Packet>& out) {
  ++dupacks_;
  switch (mode_) {
    case Mode::kOpen: {
      const bool triggered =
          dupacks_ >= config_.dupack_threshold ||
          (config_.variant == Variant::kSack && FirstSegmentLostBySack());
      if (triggered && (!recover_ || snd_una_ > *recover_))
        EnterFastRecovery(now, out);
      break;
    }
    case Mode::kFastRecovery:
      if (config_.variant == Variant::kSack) {
        MarkSackLosses();
      } else {
        SetCwnd(cwnd_ + 1.0);
      }
      break;
    case Mode::kRtoRecovery:
      break;
  }
}

double TcpSender::HalvedFlight() const {
  const double flight =
      static_cast<double>(snd_nxt_ - snd_una_) / config_.mss;
  return std::max(std::floor(flight / 2.0), 2.0);
}

void TcpSender::EnterFastRecovery(SimTime now,
                                  std::vector<net::Packet>& out) {
  ssthresh_ = HalvedFlight();
  recovery_point_ = snd_nxt_;
  recover_ = snd_nxt_;
  mode_ = Mode::kFastRecovery;
  ++stats_.fast_recoveries;

  Segment& first = segments_.front();
  first.lost = true;
  if (config_.variant == Variant::kSack) {
    SetCwnd(ssthresh_);
    MarkSackLosses();
  } else {
    SetCwnd(ssthresh_ + 3.0);
  }
  if (config_.variant == Variant::kVegas) VegasResetEpoch();
  // The fast retransmission goes out regardless of the window and re-arms
  // the timer.
  Transmit(first, now, out);
  RestartTimer(now);
}

std::vector<net::Packet> TcpSender::OnTimeout(SimTime now) {
  std::vector<net::Packet> out;
  rto_deadline_.reset();
  if (snd_una_ == snd_nxt_) return out;

  ssthresh_ = HalvedFlight();
  SetCwnd(1.0);
  backoff_ = std::min(backoff_ * 2, config_.max_backoff);
  mode_ = Mode::kRtoRecovery;
  recovery_point_ = snd_nxt_;
  recover_ = snd_nxt_;
  dupacks_ = 0;
  for (Segment& s : segments_) {
    if (s.sacked) continue;
    s.lost = true;
    s.retransmitted = false;
  }
  if (config_.variant == Variant::kVegas) VegasResetEpoch();
  ++stats_.timeouts;

  TrySend(now, out);
  RestartTimer(now);
  MaybeReport(now);
  return out;
}

void TcpSender::TakeRttSample(SimTime sample) {
  ++stats_.rtt_samples;
  if (!srtt_) {
    srtt_ = sample;
    rttvar_ = SimTime::Nanos(sample.ns() / 2);
  } else {
    const int64_t err = std::llabs(srtt_->ns() - sample.ns());
    rttvar_ = SimTime::Nanos((3 * rttvar_.ns() + err) / 4);
    srtt_ = SimTime::Nanos((7 * srtt_->ns() + sample.ns()) / 8);
  }
  rto_ = std::max(config_.min_rto, *srtt_ + rttvar_ * 4);
  backoff_ = 1;

  if (config_.variant == Variant::kVegas) {
    if (!base_rtt_ || sample < *base_rtt_) base_rtt_ = sample;
    if (!epoch_min_rtt_ || sample < *epoch_min_rtt_) epoch_min_rtt_ = sample;
  }
}

void TcpSender::GrowWindow() {
  if (config_.variant == Variant::kVegas) {
    // Vegas grows per ack only in slow start, and only every other epoch.
    if (cwnd_ < ssthresh_ && vegas_grow_epoch_) SetCwnd(cwnd_ + 1.0);
    return;
  }
  if (cwnd_ < ssthresh_) {
    SetCwnd(cwnd_ + 1.0);
  } else {
    SetCwnd(cwnd_ + 1.0 / cwnd_);
  }
}

void TcpSender::VegasOnAck(uint64_t ack) {
  if (ack < epoch_end_seq_) return;
  if (epoch_min_rtt_) VegasEpoch(*epoch_min_rtt_);
  epoch_end_seq_ = snd_nxt_;
  epoch_min_rtt_.reset();
}

void TcpSender::VegasResetEpoch() {
  epoch_end_seq_ = snd_nxt_;
  epoch_min_rtt_.reset();
  vegas_grow_epoch_ = true;
}

void TcpSender::VegasEpoch(SimTime rtt_sample) {
  if (rtt_sample <= SimTime::Zero()) return;
  if (!base_rtt_ || rtt_sample < *base_rtt_) base_rtt_ = rtt_sample;
  const double base = base_rtt_->seconds();
  const double rtt = rtt_sample.seconds();
  // Segments this flow keeps queued: (expected - actual) * base_rtt.
  const double diff = (cwnd_ / base - cwnd_ / rtt) * base;

  if (cwnd_ < ssthresh_) {
    if (diff > config_.vegas_gamma) {
      const double target = std::floor(cwnd_ * base / rtt) + 1.0;
      SetCwnd(std::max(2.0, std::min(cwnd_, target)));
      ssthresh_ = std::min(ssthresh_, std::max(cwnd_ - 1.0, 1.0));
      vegas_grow_epoch_ = true;
    } else {
      vegas_grow_epoch_ = !vegas_grow_epoch_;
    }
    return;
  }
  if (diff < config_.vegas_alpha) {
    SetCwnd(cwnd_ + 1.0);
  } else if (diff > config_.vegas_beta) {
    SetCwnd(std::max(2.0, cwnd_ - 1.0));
    ssthresh_ = std::min(ssthresh_, std::max(cwnd_ - 1.0, 1.0));
  }
}

void TcpSender::SetCwnd(double cwnd) { cwnd_ = std::max(1.0, cwnd); }

void TcpSender::MaybeReport(SimTime now) {
  if (cwnd_ == reported_cwnd_ && ssthresh_ == reported_ssthresh_) return;
  ReportCwnd(now);
}

void TcpSender::ReportCwnd(SimTime now) {
  reported_cwnd_ = cwnd_;
  reported_ssthresh_ = ssthresh_;
  if (cwnd_probe_) cwnd_probe_(now, cwnd_, ssthresh_);
}

}  // namespace simrun::tcp
