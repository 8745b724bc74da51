#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "simrun/sim/kernel.h"
#include "simrun/sim/sim_time.h"

namespace simrun::sim {
namespace {

constexpr EventKind kAny = EventKind::kAppGenerate;

TEST(SimTimeTest, ConstructorsAgree) {
  EXPECT_EQ(SimTime::Millis(1).ns(), 1000000);
  EXPECT_EQ(SimTime::Micros(3).ns(), 3000);
  EXPECT_EQ(SimTime::FromWholeSeconds(1000).ns(), 1000000000000LL);
  EXPECT_EQ(SimTime::Seconds(0.08), SimTime::Millis(80));
  EXPECT_EQ(SimTime::Seconds(799.9).ns(), 799900000000LL);
}

TEST(SimTimeTest, FormatsNineDecimals) {
  EXPECT_EQ(FormatSeconds(SimTime::Zero()), "0.000000000");
  EXPECT_EQ(FormatSeconds(SimTime::Nanos(23437500)), "0.023437500");
  EXPECT_EQ(FormatSeconds(SimTime::FromWholeSeconds(1000)), "1000.000000000");
  EXPECT_EQ(FormatSeconds(SimTime::Nanos(-1500000000)), "-1.500000000");
}

TEST(SimTimeTest, ParseInvertsFormat) {
  for (int64_t ns : {0LL, 1LL, 23437500LL, 999999999LL, 1000000000000LL,
                     -1500000000LL}) {
    const auto parsed = ParseSeconds(FormatSeconds(SimTime::Nanos(ns)));
    ASSERT_TRUE(parsed.has_value());
    EXPECT_EQ(parsed->ns(), ns);
  }
  EXPECT_EQ(ParseSeconds("2.5")->ns(), 2500000000LL);
  EXPECT_FALSE(ParseSeconds("1.0000000001").has_value());
  EXPECT_FALSE(ParseSeconds("abc").has_value());
  EXPECT_FALSE(ParseSeconds("").has_value());
}

TEST(KernelTest, FiresInTimeOrderRegardlessOfSchedulingOrder) {
  Kernel k;
  std::vector<int> fired;
  k.Schedule(SimTime::FromWholeSeconds(5), kAny, 0, [&] { fired.push_back(5); });
  k.Schedule(SimTime::FromWholeSeconds(3), kAny, 0, [&] { fired.push_back(3); });
  k.RunUntil(SimTime::FromWholeSeconds(10));
  EXPECT_EQ(fired, (std::vector<int>{3, 5}));
}

TEST(KernelTest, EqualTimesFireInSequenceOrder) {
  Kernel k;
  std::vector<EventId> fired;
  const SimTime t = SimTime::FromWholeSeconds(7);
  EventId first = 0;
  EventId second = 0;
  first = k.Schedule(t, kAny, 0, [&] { fired.push_back(first); });
  second = k.Schedule(t, kAny, 0, [&] { fired.push_back(second); });
  ASSERT_LT(first, second);
  k.RunUntil(SimTime::FromWholeSeconds(8));
  EXPECT_EQ(fired, (std::vector<EventId>{first, second}));
}

TEST(KernelTest, CancelledEventNeverFires) {
  Kernel k;
  bool fired = false;
  const EventId id =
      k.Schedule(SimTime::FromWholeSeconds(1), kAny, 0, [&] { fired = true; });
  EXPECT_TRUE(k.Cancel(id));
  EXPECT_FALSE(k.Cancel(id));
  k.RunUntil(SimTime::FromWholeSeconds(2));
  EXPECT_FALSE(fired);
  EXPECT_EQ(k.stats().cancelled, 1u);
  EXPECT_EQ(k.stats().processed, 0u);
}

TEST(KernelTest, EmptyQueueAdvancesClockToEnd) {
  Kernel k;
  const RunStats r = k.RunUntil(SimTime::FromWholeSeconds(1000));
  EXPECT_EQ(r.events_processed, 0u);
  EXPECT_EQ(r.final_clock, SimTime::FromWholeSeconds(1000));
  EXPECT_EQ(k.Now(), SimTime::FromWholeSeconds(1000));
}

TEST(KernelTest, StopsAtBoundaryLeavingLaterEventsPending) {
  Kernel k;
  for (int s : {1, 2, 3})
    k.Schedule(SimTime::FromWholeSeconds(s), kAny, 0, [] {});
  const RunStats r = k.RunUntil(SimTime::Millis(2500));
  EXPECT_EQ(r.events_processed, 2u);
  EXPECT_EQ(k.stats().pending, 1u);
}

TEST(KernelTest, EventAtExactlyEndIsProcessed) {
  Kernel k;
  bool fired = false;
  k.Schedule(SimTime::FromWholeSeconds(2), kAny, 0, [&] { fired = true; });
  k.RunUntil(SimTime::FromWholeSeconds(2));
  EXPECT_TRUE(fired);
}

TEST(KernelTest, SchedulingInThePastThrows) {
  Kernel k;
  k.RunUntil(SimTime::FromWholeSeconds(5));
  EXPECT_THROW(k.Schedule(SimTime::FromWholeSeconds(4), kAny, 0, [] {}),
               std::logic_error);
  EXPECT_NO_THROW(k.Schedule(SimTime::FromWholeSeconds(5), kAny, 0, [] {}));
}

TEST(KernelTest, ZeroDelayEventsRunAfterCurrentOne) {
  Kernel k;
  std::vector<int> order;
  k.Schedule(SimTime::FromWholeSeconds(1), kAny, 0, [&] {
    order.push_back(1);
    k.ScheduleIn(SimTime::Zero(), kAny, 0, [&] { order.push_back(3); });
  });
  k.Schedule(SimTime::FromWholeSeconds(1), kAny, 0, [&] { order.push_back(2); });
  k.RunUntil(SimTime::FromWholeSeconds(1));
  EXPECT_EQ(order, (std::vector<int>{1, 2, 3}));
}

TEST(KernelTest, LivelockCapAbortsRun) {
  Kernel k(KernelOptions{1000});
  std::function<void()> again = [&] {
    k.ScheduleIn(SimTime::Zero(), kAny, 0, again);
  };
  k.Schedule(SimTime::Zero(), kAny, 0, again);
  EXPECT_THROW(k.RunUntil(SimTime::FromWholeSeconds(1)), std::runtime_error);
}

TEST(KernelTest, ClockNeverDecreasesAndNoEventIsLost) {
  Kernel k;
  std::vector<SimTime> seen;
  uint64_t x = 12345;
  std::vector<EventId> ids;
  for (int i = 0; i < 2000; ++i) {
    x = x * 6364136223846793005ULL + 1442695040888963407ULL;
    const SimTime at = SimTime::Micros(static_cast<int64_t>(x >> 44));
    ids.push_back(k.Schedule(at, kAny, 0, [&] {
      seen.push_back(k.Now());
      if (seen.size() % 3 == 0)
        k.ScheduleIn(SimTime::Micros(5), kAny, 0, [&] { seen.push_back(k.Now()); });
    }));
  }
  for (size_t i = 0; i < ids.size(); i += 7) k.Cancel(ids[i]);
  k.RunUntil(SimTime::Millis(500));
  for (size_t i = 1; i < seen.size(); ++i) EXPECT_LE(seen[i - 1], seen[i]);
  const KernelStats s = k.stats();
  EXPECT_EQ(s.scheduled, s.processed + s.cancelled + s.pending);
}

TEST(KernelTest, IdenticalSchedulesGiveIdenticalDigests) {
  auto run = [] {
    Kernel k;
    for (int i = 0; i < 100; ++i)
      k.Schedule(SimTime::Millis(i % 10), EventKind::kProbe, i, [] {});
    k.RunUntil(SimTime::FromWholeSeconds(1));
    return k.stats().trace_digest;
  };
  EXPECT_EQ(run(), run());
}

}  // namespace
}  // namespace simrun::sim
