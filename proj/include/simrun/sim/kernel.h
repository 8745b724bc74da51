#ifndef SIMRUN_SIM_KERNEL_H_
#define SIMRUN_SIM_KERNEL_H_

#include <cstdint>
#include <functional>
#include <queue>
#include <unordered_set>
#include <vector>

#include "simrun/sim/sim_time.h"

namespace simrun::sim {

enum class EventKind : uint8_t {
  kPacketArrival,
  kTransmitComplete,
  kTimerExpiry,
  kAppGenerate,
  kProbe,
};

using EventId = uint64_t;

struct KernelOptions {
  // Maximum number of consecutive events processed without the clock
  // advancing. Exceeding it aborts the run as a livelock.
  uint64_t max_events_per_instant = 1000000;
};

struct RunStats {
  uint64_t events_processed = 0;
  SimTime final_clock;
};

struct KernelStats {
  uint64_t scheduled = 0;
  uint64_t processed = 0;
  uint64_t cancelled = 0;
  uint64_t pending = 0;
  // FNV-1a over (fire_at, seq, kind, target) of every processed event.
  uint64_t trace_digest = 14695981039346656037ULL;
};

// Single-threaded discrete-event engine. Events fire in (fire_at, seq)
// order where seq is issued at scheduling time, so simultaneous events run
// in the order they were scheduled.
class Kernel {
 public:
  using Action = std::function<void()>;

  explicit Kernel(KernelOptions options = {});
  Kernel(const Kernel&) = delete;
  Kernel& operator=(const Kernel&) = delete;

  // Throws std::logic_error if `fire_at` is earlier than Now().
  EventId Schedule(SimTime fire_at, EventKind kind, uint32_t target,
                   Action action);
  EventId ScheduleIn(SimTime delay, EventKind kind, uint32_t target,
                     Action action) {
    return Schedule(now_ + delay, kind, target, std::move(action));
  }

  // Returns false if the event already fired, was cancelled, or never
  // existed.
  bool Cancel(EventId id);

  // Processes every event with fire_at <= t_end, then leaves the clock at
  // t_end. Throws std::runtime_error on livelock.
  RunStats RunUntil(SimTime t_end);

  SimTime Now() const { return now_; }
  KernelStats stats() const;
  bool empty() const { return live_.empty(); }

 private:
  struct Event {
    SimTime fire_at;
    EventId seq;
    uint32_t target;
    EventKind kind;
    Action action;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
      return a.seq > b.seq;
    }
  };

  KernelOptions options_;
  SimTime now_;
  EventId next_seq_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::unordered_set<EventId> live_;
  KernelStats stats_;
  uint64_t same_instant_count_ = 0;
  SimTime last_fired_ = SimTime::Nanos(-1);
};

}  // namespace simrun::sim

#endif  // SIMRUN_SIM_KERNEL_H_
