#include <algorithm>
#include <vector>

#include <gtest/gtest.h>

#include "simrun/tcp/tcp_receiver.h"
#include "simrun/tcp/tcp_sender.h"

namespace simrun::tcp {
namespace {

constexpr uint32_t kMss = 1460;
const Endpoint kEp{1, 0, 4, net::Direction::kUplink};

SenderConfig Cfg(Variant v, double cwnd, double ssthresh = 0.0) {
  SenderConfig c;
  c.variant = v;
  c.initial_cwnd = cwnd;
  c.initial_ssthresh = ssthresh;
  return c;
}

net::Packet Ack(uint64_t ack, std::vector<net::ByteRange> sack = {}) {
  net::Packet p;
  p.header.ack_flag = true;
  p.header.ack = ack;
  p.header.sack_count = static_cast<uint8_t>(sack.size());
  for (size_t i = 0; i < sack.size(); ++i) p.header.sack[i] = sack[i];
  return p;
}

net::Packet Seg(uint64_t seq, uint32_t len) {
  net::Packet p;
  p.header.seq = seq;
  p.payload_bytes = len;
  p.wire_bytes = len + net::kHeaderBytes;
  return p;
}

SimTime Ms(int64_t ms) { return SimTime::Millis(ms); }

// --- on_app_data ---

TEST(SenderAppDataTest, SmallApduLeavesAsOnePushedPacket) {
  TcpSender s(Cfg(Variant::kSack, 2), kEp);
  const auto out = s.OnAppData(100, SimTime::Zero());
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].wire_bytes, 140u);
  EXPECT_EQ(out[0].payload_bytes, 100u);
  EXPECT_TRUE(out[0].header.psh);
}

TEST(SenderAppDataTest, LargeApduIsCutIntoMssChunks) {
  TcpSender s(Cfg(Variant::kSack, 10), kEp);
  const auto out = s.OnAppData(3000, SimTime::Zero());
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].payload_bytes, 1460u);
  EXPECT_EQ(out[1].payload_bytes, 1460u);
  EXPECT_EQ(out[2].payload_bytes, 80u);
  EXPECT_EQ(out[0].wire_bytes, 1500u);
  EXPECT_FALSE(out[0].header.psh);
  EXPECT_FALSE(out[1].header.psh);
  EXPECT_TRUE(out[2].header.psh);
}

TEST(SenderAppDataTest, ClosedWindowBuffersTheApdu) {
  TcpSender s(Cfg(Variant::kSack, 2), kEp);
  ASSERT_EQ(s.OnAppData(2 * kMss, SimTime::Zero()).size(), 2u);
  EXPECT_EQ(s.NewDataRoom(), 0u);
  EXPECT_TRUE(s.OnAppData(500, Ms(1)).empty());
  EXPECT_EQ(s.unsent_bytes(), 500u);
}

TEST(SenderAppDataTest, AdvertisedWindowCapsFlight) {
  SenderConfig c = Cfg(Variant::kSack, 50);
  c.adv_window = 4;
  TcpSender s(c, kEp);
  EXPECT_EQ(s.OnAppData(10 * kMss, SimTime::Zero()).size(), 4u);
  EXPECT_EQ(s.flight_bytes(), 4u * kMss);
}

// --- on_ack: window growth and New Reno recovery ---

TEST(SenderAckTest, NewRenoCongestionAvoidanceAddsOneOverCwnd) {
  TcpSender s(Cfg(Variant::kNewReno, 8, 4), kEp);
  s.Write(8 * kMss);
  ASSERT_EQ(s.Poll(SimTime::Zero()).size(), 8u);
  s.OnAck(Ack(kMss), Ms(200));
  EXPECT_DOUBLE_EQ(s.cwnd(), 8.125);
}

TEST(SenderAckTest, SlowStartAddsOnePerAck) {
  TcpSender s(Cfg(Variant::kSack, 2), kEp);
  s.Write(20 * kMss);
  s.Poll(SimTime::Zero());
  s.OnAck(Ack(kMss), Ms(200));
  EXPECT_DOUBLE_EQ(s.cwnd(), 3.0);
}

TEST(SenderAckTest, NewRenoThirdDupAckHalvesAndRetransmitsOnce) {
  TcpSender s(Cfg(Variant::kNewReno, 10, 10), kEp);
  s.Write(30 * kMss);
  ASSERT_EQ(s.Poll(SimTime::Zero()).size(), 10u);
  EXPECT_TRUE(s.OnAck(Ack(0), Ms(200)).empty());
  EXPECT_TRUE(s.OnAck(Ack(0), Ms(201)).empty());
  const auto out = s.OnAck(Ack(0), Ms(202));
  EXPECT_DOUBLE_EQ(s.ssthresh(), 5.0);
  EXPECT_DOUBLE_EQ(s.cwnd(), 8.0);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].header.seq, 0u);
  EXPECT_EQ(s.mode(), Mode::kFastRecovery);
  EXPECT_EQ(s.recovery_point(), 10u * kMss);
}

TEST(SenderAckTest, NewRenoPartialAckRetransmitsNextHoleAndDeflates) {
  TcpSender s(Cfg(Variant::kNewReno, 10, 10), kEp);
  s.Write(10 * kMss);
  s.Poll(SimTime::Zero());
  for (int i = 0; i < 3; ++i) s.OnAck(Ack(0), Ms(200 + i));
  ASSERT_DOUBLE_EQ(s.cwnd(), 8.0);
  // Segments 0 and 3 were lost; the retransmission of 0 is acked up to 3.
  const auto out = s.OnAck(Ack(3 * kMss), Ms(400));
  EXPECT_EQ(s.mode(), Mode::kFastRecovery);
  ASSERT_FALSE(out.empty());
  EXPECT_EQ(out[0].header.seq, 3u * kMss);
  EXPECT_DOUBLE_EQ(s.cwnd(), 8.0 - 3.0 + 1.0);
  s.OnAck(Ack(10 * kMss), Ms(600));
  EXPECT_EQ(s.mode(), Mode::kOpen);
  EXPECT_DOUBLE_EQ(s.cwnd(), 5.0);
}

TEST(SenderAckTest, SackRetransmitsOnlyTheHole) {
  TcpSender s(Cfg(Variant::kSack, 5, 5), kEp);
  TcpReceiver r(ReceiverConfig{true, false});
  s.Write(5 * kMss);
  auto sent = s.Poll(SimTime::Zero());
  ASSERT_EQ(sent.size(), 5u);
  std::vector<net::Packet> emitted;
  // Segment 2 (index 1) is lost.
  for (size_t i = 0; i < sent.size(); ++i) {
    if (i == 1) continue;
    const net::Packet ack = r.OnData(sent[i], Ms(100));
    for (auto& p : s.OnAck(ack, Ms(200 + static_cast<int64_t>(i))))
      emitted.push_back(p);
  }
  ASSERT_EQ(emitted.size(), 1u);
  EXPECT_EQ(emitted[0].header.seq, 1u * kMss);
  EXPECT_EQ(s.mode(), Mode::kFastRecovery);
  const net::Packet full = r.OnData(emitted[0], Ms(300));
  EXPECT_EQ(full.header.ack, 5u * kMss);
  s.OnAck(full, Ms(400));
  EXPECT_EQ(s.mode(), Mode::kOpen);
  EXPECT_TRUE(s.idle());
}

TEST(SenderAckTest, AckBelowSndUnaIsIgnored) {
  TcpSender s(Cfg(Variant::kSack, 4), kEp);
  s.Write(4 * kMss);
  s.Poll(SimTime::Zero());
  s.OnAck(Ack(2 * kMss), Ms(200));
  const double cwnd = s.cwnd();
  EXPECT_TRUE(s.OnAck(Ack(kMss), Ms(201)).empty());
  EXPECT_EQ(s.snd_una(), 2u * kMss);
  EXPECT_EQ(s.dupacks(), 0u);
  EXPECT_DOUBLE_EQ(s.cwnd(), cwnd);
}

TEST(SenderAckTest, KarnSkipsSamplesCoveringRetransmissions) {
  TcpSender s(Cfg(Variant::kNewReno, 4, 4), kEp);
  s.Write(4 * kMss);
  s.Poll(SimTime::Zero());
  s.OnTimeout(SimTime::FromWholeSeconds(1));  // retransmits segment 0
  const uint64_t before = s.stats().rtt_samples;
  s.OnAck(Ack(kMss), SimTime::FromWholeSeconds(2));
  EXPECT_EQ(s.stats().rtt_samples, before);
  EXPECT_FALSE(s.srtt().has_value());
}

TEST(SenderAckTest, RtoFollowsEstimatorAndMinimum) {
  TcpSender s(Cfg(Variant::kSack, 4), kEp);
  s.Write(kMss);
  s.Poll(SimTime::Zero());
  s.OnAck(Ack(kMss), Ms(160));
  // First sample: srtt = 160, rttvar = 80, rto = 160 + 320.
  EXPECT_EQ(*s.srtt(), Ms(160));
  EXPECT_EQ(s.rttvar(), Ms(80));
  EXPECT_EQ(s.CurrentRto(), Ms(480));
  s.Write(kMss);
  s.Poll(Ms(160));
  s.OnAck(Ack(2 * kMss), Ms(160 + 240));
  // srtt = 7/8*160 + 1/8*240 = 170; rttvar = 3/4*80 + 1/4*80 = 80.
  EXPECT_EQ(*s.srtt(), Ms(170));
  EXPECT_EQ(s.rttvar(), Ms(80));
  EXPECT_EQ(s.CurrentRto(), Ms(490));

  TcpSender fast(Cfg(Variant::kSack, 4), kEp);
  fast.Write(kMss);
  fast.Poll(SimTime::Zero());
  fast.OnAck(Ack(kMss), Ms(1));
  EXPECT_EQ(fast.CurrentRto(), Ms(200));
}

// --- vegas_epoch ---

TEST(VegasTest, UncongestedPathGrows) {
  TcpSender s(Cfg(Variant::kVegas, 10, 2), kEp);
  s.set_vegas_base_rtt(Ms(160));
  s.VegasEpoch(Ms(160));
  EXPECT_DOUBLE_EQ(s.cwnd(), 11.0);
}

TEST(VegasTest, DiffBetweenAlphaAndBetaHolds) {
  TcpSender s(Cfg(Variant::kVegas, 10, 2), kEp);
  s.set_vegas_base_rtt(Ms(160));
  // (10/0.16 - 10/0.2) * 0.16 = 2 segments.
  s.VegasEpoch(Ms(200));
  EXPECT_DOUBLE_EQ(s.cwnd(), 10.0);
}

TEST(VegasTest, DiffAboveBetaShrinks) {
  TcpSender s(Cfg(Variant::kVegas, 20, 2), kEp);
  s.set_vegas_base_rtt(Ms(160));
  // (20/0.16 - 20/0.3) * 0.16 = 9.33 segments.
  s.VegasEpoch(Ms(300));
  EXPECT_DOUBLE_EQ(s.cwnd(), 19.0);
}

TEST(VegasTest, WindowFloorIsTwoSegments) {
  TcpSender s(Cfg(Variant::kVegas, 2, 2), kEp);
  s.set_vegas_base_rtt(Ms(100));
  s.VegasEpoch(Ms(1000));
  EXPECT_DOUBLE_EQ(s.cwnd(), 2.0);
}

TEST(VegasTest, SmallerSampleUpdatesBaseRttFirst) {
  TcpSender s(Cfg(Variant::kVegas, 10, 2), kEp);
  s.set_vegas_base_rtt(Ms(160));
  s.VegasEpoch(Ms(120));
  EXPECT_EQ(*s.vegas_base_rtt(), Ms(120));
  EXPECT_DOUBLE_EQ(s.cwnd(), 11.0);
}

TEST(VegasTest, SlowStartExitsWhenDiffExceedsGamma) {
  TcpSender s(Cfg(Variant::kVegas, 16, 64), kEp);
  s.set_vegas_base_rtt(Ms(160));
  ASSERT_TRUE(s.vegas_in_slow_start());
  // diff = 16 * (1 - 160/200) = 3.2 > gamma.
  s.VegasEpoch(Ms(200));
  EXPECT_FALSE(s.vegas_in_slow_start());
  // cwnd = floor(16 * 160 / 200) + 1 = 13.
  EXPECT_DOUBLE_EQ(s.cwnd(), 13.0);
}

// Lossless path with a fixed 100 ms RTT; all acks of a round arrive
// together. Returns cwnd at the start of each round.
std::vector<double> SlowStartRounds(Variant v, int rounds) {
  TcpSender s(Cfg(v, 2, 1000), kEp);
  s.Write(10000 * kMss);
  std::vector<double> per_round;
  SimTime now = SimTime::Zero();
  auto flight = s.Poll(now);
  for (int r = 0; r < rounds; ++r) {
    per_round.push_back(s.cwnd());
    now = now + Ms(100);
    std::vector<net::Packet> next;
    for (const net::Packet& p : flight) {
      for (auto& q : s.OnAck(Ack(p.header.seq + p.payload_bytes), now))
        next.push_back(q);
    }
    flight = std::move(next);
  }
  return per_round;
}

TEST(VegasTest, SlowStartGrowsOnlyEveryOtherEpoch) {
  const auto reno = SlowStartRounds(Variant::kNewReno, 7);
  const auto vegas = SlowStartRounds(Variant::kVegas, 7);
  // Standard slow start doubles every round.
  for (size_t i = 1; i < reno.size(); ++i) EXPECT_EQ(reno[i], 2 * reno[i - 1]);
  // Vegas doubles only in alternate epochs: after six rounds it has
  // doubled about three times, never more than four.
  EXPECT_GT(vegas.back(), 2.0 * 8);
  EXPECT_LE(vegas.back(), 2.0 * 16 + 1);
  EXPECT_LT(vegas.back(), reno.back() / 2);
  for (size_t i = 1; i < vegas.size(); ++i) EXPECT_GE(vegas[i], vegas[i - 1]);
}

// --- on_timeout ---

TEST(TimeoutTest, HalvesFlightAndCollapsesWindow) {
  TcpSender s(Cfg(Variant::kSack, 16, 64), kEp);
  s.Write(16 * kMss);
  ASSERT_EQ(s.Poll(SimTime::Zero()).size(), 16u);
  const auto out = s.OnTimeout(SimTime::FromWholeSeconds(1));
  EXPECT_DOUBLE_EQ(s.ssthresh(), 8.0);
  EXPECT_DOUBLE_EQ(s.cwnd(), 1.0);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].header.seq, 0u);
  EXPECT_EQ(s.mode(), Mode::kRtoRecovery);
}

TEST(TimeoutTest, ConsecutiveTimeoutsDoubleTheRto) {
  TcpSender s(Cfg(Variant::kNewReno, 4), kEp);
  s.Write(kMss);
  s.Poll(SimTime::Zero());
  const SimTime base = s.CurrentRto();
  EXPECT_EQ(base, SimTime::FromWholeSeconds(1));
  s.OnTimeout(base);
  EXPECT_EQ(s.CurrentRto(), base * 2);
  s.OnTimeout(base * 3);
  EXPECT_EQ(s.CurrentRto(), base * 4);
}

TEST(TimeoutTest, BackoffIsCapped) {
  SenderConfig c = Cfg(Variant::kNewReno, 4);
  c.max_rto = SimTime::FromWholeSeconds(1000);
  TcpSender s(c, kEp);
  s.Write(kMss);
  s.Poll(SimTime::Zero());
  SimTime now = SimTime::Zero();
  for (int i = 0; i < 10; ++i) {
    now = now + s.CurrentRto();
    s.OnTimeout(now);
  }
  EXPECT_EQ(s.backoff(), 64u);
  EXPECT_EQ(s.CurrentRto(), SimTime::FromWholeSeconds(64));
}

TEST(TimeoutTest, StaleTimerWithNothingOutstandingIsNoop) {
  TcpSender s(Cfg(Variant::kSack, 4), kEp);
  const auto out = s.OnTimeout(SimTime::FromWholeSeconds(1));
  EXPECT_TRUE(out.empty());
  EXPECT_DOUBLE_EQ(s.cwnd(), 4.0);
  EXPECT_EQ(s.stats().timeouts, 0u);
}

TEST(TimeoutTest, VegasRestartsEpochAfterTimeout) {
  TcpSender s(Cfg(Variant::kVegas, 8, 2), kEp);
  s.Write(8 * kMss);
  s.Poll(SimTime::Zero());
  s.OnTimeout(SimTime::FromWholeSeconds(1));
  EXPECT_DOUBLE_EQ(s.cwnd(), 1.0);
  EXPECT_DOUBLE_EQ(s.ssthresh(), 4.0);
}

// --- on_data ---

TEST(ReceiverTest, InOrderSegmentAdvancesAck) {
  TcpReceiver r;
  const net::Packet seg = Seg(0, 1460);
  const net::Packet ack = r.OnData(seg, SimTime::Zero());
  EXPECT_EQ(ack.header.ack, 1460u);
  EXPECT_TRUE(ack.header.ack_flag);
  EXPECT_EQ(ack.wire_bytes, 40u);
  EXPECT_EQ(ack.header.sack_count, 0u);
  EXPECT_EQ(r.delivered(), 1460u);
}

TEST(ReceiverTest, GapIsReportedAsSackBlock) {
  TcpReceiver r(ReceiverConfig{true, false});
  r.OnData(Seg(0, 1460), SimTime::Zero());
  const net::Packet ack = r.OnData(Seg(2 * 1460, 1460), SimTime::Zero());
  EXPECT_EQ(ack.header.ack, 1460u);
  ASSERT_EQ(ack.header.sack_count, 1u);
  EXPECT_EQ(ack.header.sack[0], (net::ByteRange{2920, 4380}));
}

TEST(ReceiverTest, SackBlocksMostRecentFirstAtMostThree) {
  TcpReceiver r(ReceiverConfig{true, false});
  for (uint64_t k : {2, 4, 6, 8}) r.OnData(Seg(k * 100, 100), SimTime::Zero());
  const net::Packet ack = r.OnData(Seg(400, 100), SimTime::Zero());
  ASSERT_EQ(ack.header.sack_count, 3u);
  EXPECT_EQ(ack.header.sack[0], (net::ByteRange{400, 500}));
  EXPECT_EQ(ack.header.sack[1], (net::ByteRange{800, 900}));
  EXPECT_EQ(ack.header.sack[2], (net::ByteRange{600, 700}));
}

TEST(ReceiverTest, NoSackBlocksWithoutSack) {
  TcpReceiver r(ReceiverConfig{false, false});
  r.OnData(Seg(0, 100), SimTime::Zero());
  const net::Packet ack = r.OnData(Seg(200, 100), SimTime::Zero());
  EXPECT_EQ(ack.header.ack, 100u);
  EXPECT_EQ(ack.header.sack_count, 0u);
}

TEST(ReceiverTest, DuplicateSegmentIsNotDeliveredTwice) {
  TcpReceiver r;
  uint64_t delivered = 0;
  r.set_delivery_callback([&](net::ByteRange b) { delivered += b.size(); });
  r.OnData(Seg(0, 500), SimTime::Zero());
  const net::Packet dup = r.OnData(Seg(0, 500), SimTime::Zero());
  EXPECT_EQ(dup.header.ack, 500u);
  EXPECT_EQ(delivered, 500u);
  EXPECT_EQ(r.duplicate_segments(), 1u);
}

TEST(ReceiverTest, FillingGapDeliversEverythingInOrder) {
  TcpReceiver r;
  std::vector<net::ByteRange> deliveries;
  r.set_delivery_callback([&](net::ByteRange b) { deliveries.push_back(b); });
  r.OnData(Seg(100, 100), SimTime::Zero());
  r.OnData(Seg(300, 100), SimTime::Zero());
  EXPECT_TRUE(deliveries.empty());
  r.OnData(Seg(0, 100), SimTime::Zero());
  r.OnData(Seg(200, 100), SimTime::Zero());
  ASSERT_EQ(deliveries.size(), 2u);
  EXPECT_EQ(deliveries[0], (net::ByteRange{0, 200}));
  EXPECT_EQ(deliveries[1], (net::ByteRange{200, 400}));
  EXPECT_TRUE(r.out_of_order().empty());
}

TEST(ReceiverTest, AckIsAddressedBackToSender) {
  TcpReceiver r;
  net::Packet seg = Seg(0, 10);
  seg.flow = 5;
  seg.src = 1;
  seg.dst = 4;
  seg.direction = net::Direction::kUplink;
  const net::Packet ack = r.OnData(seg, SimTime::Zero());
  EXPECT_EQ(ack.flow, 5u);
  EXPECT_EQ(ack.src, 4u);
  EXPECT_EQ(ack.dst, 1u);
  EXPECT_EQ(ack.direction, net::Direction::kDownlink);
}

}  // namespace
}  // namespace simrun::tcp
