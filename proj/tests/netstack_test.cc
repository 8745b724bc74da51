#include <optional>
#include <vector>

#include <gtest/gtest.h>

#include "simrun/config_error.h"
#include "simrun/net/drop_tail_queue.h"
#include "simrun/net/link.h"
#include "simrun/net/port.h"
#include "simrun/net/topology.h"
#include "simrun/sim/kernel.h"

namespace simrun::net {
namespace {

Packet Data(uint32_t payload, FlowId flow = 1) {
  Packet p;
  p.flow = flow;
  p.payload_bytes = payload;
  p.wire_bytes = payload + kHeaderBytes;
  return p;
}

// Independent oracle: ceil(bytes * 8 * 1e9 / rate) nanoseconds.
int64_t SerNs(uint64_t bytes, uint64_t rate) {
  const unsigned __int128 num =
      static_cast<unsigned __int128>(bytes) * 8 * 1000000000ULL;
  return static_cast<int64_t>((num + rate - 1) / rate);
}

TEST(LinkTest, FullPacketOnUplinkTakes23_4375ms) {
  Link l(512000, SimTime::Zero());
  EXPECT_EQ(l.SerializationTime(1500), SimTime::Nanos(23437500));
  EXPECT_EQ(l.Transmit(1500, SimTime::Zero()), SimTime::Nanos(23437500));
}

TEST(LinkTest, AckOnUplinkTakes0_625ms) {
  Link l(512000, SimTime::Zero());
  EXPECT_EQ(l.SerializationTime(40), SimTime::Micros(625));
}

TEST(LinkTest, FullPacketOnDownlinkTakes2ms) {
  Link l(6000000, SimTime::Zero());
  EXPECT_EQ(l.SerializationTime(1500), SimTime::Millis(2));
}

TEST(LinkTest, SerializationRoundsUpToNanosecond) {
  Link l(6000000, SimTime::Zero());
  // 320 bits at 6 Mbps = 53333.33 ns.
  EXPECT_EQ(l.SerializationTime(40).ns(), 53334);
  EXPECT_EQ(l.SerializationTime(40).ns(), SerNs(40, 6000000));
}

TEST(LinkTest, TransmitIsStoreAndForwardBehindBusyLink) {
  Link l(512000, SimTime::Millis(1));
  const SimTime d1 = l.Transmit(1500, SimTime::Zero());
  EXPECT_EQ(d1, SimTime::Nanos(23437500) + SimTime::Millis(1));
  // Second packet handed over while the first is still serializing.
  const SimTime d2 = l.Transmit(1500, SimTime::Millis(10));
  EXPECT_EQ(d2, SimTime::Nanos(2 * 23437500) + SimTime::Millis(1));
  EXPECT_EQ(l.busy_until(), SimTime::Nanos(2 * 23437500));
}

TEST(DropTailQueueTest, AcceptsUpToCapacity) {
  DropTailQueue q(20);
  for (int i = 0; i < 19; ++i)
    ASSERT_EQ(q.Enqueue(Data(1460), SimTime::Zero()), EnqueueResult::kAccepted);
  EXPECT_EQ(q.occupancy(), 19u);
  EXPECT_EQ(q.Enqueue(Data(1460), SimTime::Millis(3)), EnqueueResult::kAccepted);
  EXPECT_EQ(q.occupancy(), 20u);
}

TEST(DropTailQueueTest, DropsWhenFullAndTagsFlow) {
  DropTailQueue q(20);
  for (int i = 0; i < 20; ++i) q.Enqueue(Data(1460, 1), SimTime::Zero());
  EXPECT_EQ(q.Enqueue(Data(1460, 7), SimTime::Zero()), EnqueueResult::kDropped);
  EXPECT_EQ(q.occupancy(), 20u);
  EXPECT_EQ(q.counters().dropped, 1u);
  EXPECT_EQ(q.drops_for_flow(7), 1u);
  EXPECT_EQ(q.drops_for_flow(1), 0u);
}

TEST(DropTailQueueTest, StampsEnqueueTimeAndKeepsFifoOrder) {
  DropTailQueue q(10);
  for (uint64_t i = 1; i <= 5; ++i) {
    Packet p = Data(100);
    p.id = i;
    q.Enqueue(std::move(p), SimTime::Millis(static_cast<int64_t>(i)));
  }
  for (uint64_t i = 1; i <= 5; ++i) {
    std::optional<Packet> p = q.Dequeue(SimTime::Millis(10));
    ASSERT_TRUE(p.has_value());
    EXPECT_EQ(p->id, i);
    EXPECT_EQ(p->t_enqueued, SimTime::Millis(static_cast<int64_t>(i)));
  }
  EXPECT_FALSE(q.Dequeue(SimTime::Millis(10)).has_value());
}

TEST(DropTailQueueTest, ProbeSeesEveryOccupancyChange) {
  DropTailQueue q(1);
  std::vector<uint32_t> seen;
  q.set_probe([&](SimTime, uint32_t pkts, uint64_t, uint64_t) {
    seen.push_back(pkts);
  });
  q.Enqueue(Data(10), SimTime::Zero());
  q.Enqueue(Data(10), SimTime::Zero());  // dropped
  q.Dequeue(SimTime::Zero());
  EXPECT_EQ(seen, (std::vector<uint32_t>{1, 1, 0}));
}

// A port fed with a burst at t=0 behind one packet in transmission.
class PortTest : public ::testing::Test {
 protected:
  PortTest()
      : port_("uplink", kernel_, 1, Link(512000, SimTime::Zero()), 200, 0,
              [this](Packet p) { delivered_.push_back(p.id); }) {
    port_.set_tx_start_probe([this](const Packet& p, SimTime start) {
      waits_.push_back(start - p.t_enqueued);
    });
  }
  sim::Kernel kernel_;
  Port port_;
  std::vector<uint64_t> delivered_;
  std::vector<SimTime> waits_;
};

TEST_F(PortTest, DelayEqualsSerializationOfBytesAhead) {
  for (uint64_t i = 1; i <= 30; ++i) {
    Packet p = Data(i % 3 == 0 ? 0 : 1460);
    p.id = i;
    port_.Send(std::move(p));
  }
  kernel_.RunUntil(SimTime::FromWholeSeconds(5));
  ASSERT_EQ(delivered_.size(), 30u);
  int64_t ahead_ns = 0;
  for (uint64_t i = 1; i <= 30; ++i) {
    EXPECT_EQ(delivered_[i - 1], i);  // FIFO
    EXPECT_EQ(waits_[i - 1].ns(), ahead_ns);
    ahead_ns += SerNs(i % 3 == 0 ? 40 : 1500, 512000);
  }
}

TEST_F(PortTest, LinkNeverIdlesWithBacklog) {
  std::vector<SimTime> starts;
  port_.set_tx_start_probe(
      [&](const Packet&, SimTime start) { starts.push_back(start); });
  for (int i = 0; i < 10; ++i) port_.Send(Data(1460));
  kernel_.RunUntil(SimTime::FromWholeSeconds(1));
  for (size_t i = 1; i < starts.size(); ++i)
    EXPECT_EQ((starts[i] - starts[i - 1]).ns(), 23437500);
}

TEST_F(PortTest, VirtualWaitCountsResidualAndQueued) {
  port_.Send(Data(1460));
  port_.Send(Data(1460));
  port_.Send(Data(0));
  kernel_.RunUntil(SimTime::Millis(10));
  EXPECT_EQ(port_.VirtualWait(kernel_.Now()).ns(),
            (23437500 - 10000000) + 23437500 + 625000);
}

TEST_F(PortTest, DropFilterDiscardsBeforeTheQueue) {
  port_.set_drop_filter([](const Packet& p) { return p.id % 2 == 0; });
  for (uint64_t i = 1; i <= 6; ++i) {
    Packet p = Data(1460);
    p.id = i;
    EXPECT_EQ(port_.Send(std::move(p)), i % 2 == 0 ? EnqueueResult::kDropped
                                                   : EnqueueResult::kAccepted);
  }
  kernel_.RunUntil(SimTime::FromWholeSeconds(1));
  EXPECT_EQ(delivered_, (std::vector<uint64_t>{1, 3, 5}));
  EXPECT_EQ(port_.injected_drops(), 3u);
  EXPECT_EQ(port_.queue().counters().dropped, 0u);
}

TEST(TopologyTest, DefaultsMatchReferenceScenario) {
  sim::Kernel k;
  Topology t(k, DumbbellParams{});
  EXPECT_EQ(t.uplink().link().rate_bps(), 512000);
  EXPECT_EQ(t.downlink().link().rate_bps(), 6000000);
  EXPECT_EQ(t.uplink().queue().capacity(), 200u);
  EXPECT_EQ(t.downlink().queue().capacity(), 200u);
  const NodeId gc = t.node(Role::kGameClient);
  const NodeId hr = t.node(Role::kHomeRouter);
  EXPECT_EQ(t.port_between(gc, hr).link().rate_bps(), 100000000);
  for (auto [c, s] : {std::pair{Role::kGameClient, Role::kGameServer},
                      std::pair{Role::kFtpClient, Role::kFtpServer}}) {
    EXPECT_EQ(t.PathPropagation(t.node(c), t.node(s)), SimTime::Millis(80));
    EXPECT_EQ(t.PathPropagation(t.node(s), t.node(c)), SimTime::Millis(80));
  }
}

TEST(TopologyTest, BufferOverrideSizesUplinkQueue) {
  sim::Kernel k;
  DumbbellParams p;
  p.uplink_buffer_pkts = 20;
  Topology t(k, p);
  EXPECT_EQ(t.uplink().queue().capacity(), 20u);
}

TEST(TopologyTest, InvalidRateOrBufferIsConfigError) {
  sim::Kernel k;
  DumbbellParams p;
  p.uplink_rate_bps = 0;
  try {
    Topology t(k, p);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("uplink_rate_bps"), std::string::npos);
  }
  DumbbellParams q;
  q.uplink_buffer_pkts = 0;
  EXPECT_THROW(Topology(k, q), ConfigError);
}

TEST(TopologyTest, IdleTopologyWithoutTrafficRuns) {
  sim::Kernel k;
  Topology t(k, DumbbellParams{});
  k.RunUntil(SimTime::FromWholeSeconds(10));
  EXPECT_EQ(t.uplink().queue().counters().enqueued, 0u);
}

TEST(TopologyTest, ProbeRoundTripMatchesPropagationPlusSerialization) {
  sim::Kernel k;
  Topology t(k, DumbbellParams{});
  const NodeId client = t.node(Role::kGameClient);
  const NodeId server = t.node(Role::kGameServer);
  std::optional<SimTime> back;
  t.Bind(server, 9, [&](Packet p) {
    Packet reply = Data(0, 9);
    reply.src = server;
    reply.dst = client;
    reply.direction = Direction::kDownlink;
    (void)p;
    t.Inject(server, std::move(reply));
  });
  t.Bind(client, 9, [&](Packet) { back = k.Now(); });
  Packet probe = Data(0, 9);
  probe.src = client;
  probe.dst = server;
  t.Inject(client, std::move(probe));
  k.RunUntil(SimTime::FromWholeSeconds(1));
  ASSERT_TRUE(back.has_value());
  // Four store-and-forward hops each way.
  const int64_t up = SerNs(40, 100000000) * 2 + SerNs(40, 512000);
  const int64_t down = SerNs(40, 100000000) * 2 + SerNs(40, 6000000);
  EXPECT_EQ(back->ns(), 160000000 + up + down);
}

TEST(TopologyTest, QueuesConserveUnderOverload) {
  sim::Kernel k;
  DumbbellParams params;
  params.uplink_buffer_pkts = 20;
  Topology t(k, params);
  const NodeId ftp = t.node(Role::kFtpClient);
  const NodeId srv = t.node(Role::kFtpServer);
  uint64_t arrived = 0;
  t.Bind(srv, 3, [&](Packet) { ++arrived; });
  for (int i = 0; i < 100; ++i) {
    Packet p = Data(1460, 3);
    p.src = ftp;
    p.dst = srv;
    t.Inject(ftp, std::move(p));
  }
  k.RunUntil(SimTime::Millis(500));
  const QueueCounters& c = t.uplink().queue().counters();
  EXPECT_EQ(c.enqueued + c.dropped, 100u);
  EXPECT_EQ(c.enqueued, c.dequeued + t.uplink().queue().occupancy());
  EXPECT_GT(c.dropped, 0u);
  EXPECT_LE(c.max_occupancy, 20u);
  k.RunUntil(SimTime::FromWholeSeconds(5));
  EXPECT_EQ(arrived, 100 - c.dropped);
}

}  // namespace
}  // namespace simrun::net
