#include "simrun/sim/kernel.h"

#include <stdexcept>
#include <string>

namespace simrun::sim {
namespace {

constexpr uint64_t kFnvPrime = 1099511628211ULL;

uint64_t Mix(uint64_t digest, uint64_t value) {
  for (int i = 0; i < 8; ++i) {
    digest ^= (value >> (8 * i)) & 0xff;
    digest *= kFnvPrime;
  }
  return digest;
}

}  // namespace

Kernel::Kernel(KernelOptions options) : options_(options) {}

EventId Kernel::Schedule(SimTime fire_at, EventKind kind, uint32_t target,
                         Action action) {
  if (fire_at < now_) {
    throw std::logic_error("event scheduled in the past: fire_at=" +
                           FormatSeconds(fire_at) +
                           " now=" + FormatSeconds(now_));
  }
  const EventId id = next_seq_++;
  queue_.push(Event{fire_at, id, target, kind, std::move(action)});
  live_.insert(id);
  ++stats_.scheduled;
  return id;
}

bool Kernel::Cancel(EventId id) {
  if (live_.erase(id) == 0) return false;
  ++stats_.cancelled;
  return true;
}

RunStats Kernel::RunUntil(SimTime t_end) {
  RunStats run;
  while (!queue_.empty() && queue_.top().fire_at <= t_end) {
    // The action may schedule more events, so move it out before popping.
    Event ev = std::move(const_cast<Event&>(queue_.top()));
    queue_.pop();
    if (live_.erase(ev.seq) == 0) continue;  // cancelled

    if (ev.fire_at == last_fired_) {
      if (++same_instant_count_ > options_.max_events_per_instant) {
        throw std::runtime_error("livelock: more than " +
                                 std::to_string(
                                     options_.max_events_per_instant) +
                                 " events at t=" + FormatSeconds(ev.fire_at));
      }
    } else {
      same_instant_count_ = 1;
      last_fired_ = ev.fire_at;
    }
    now_ = ev.fire_at;
    stats_.trace_digest = Mix(stats_.trace_digest,
                              static_cast<uint64_t>(ev.fire_at.ns()));
    stats_.trace_digest = Mix(stats_.trace_digest, ev.seq);
    stats_.trace_digest =
        Mix(stats_.trace_digest, (static_cast<uint64_t>(ev.kind) << 32) |
                                     ev.target);
    ++stats_.processed;
    ++run.events_processed;
    ev.action();
  }
  if (t_end > now_) now_ = t_end;
  run.final_clock = now_;
  return run;
}

KernelStats Kernel::stats() const {
  KernelStats s = stats_;
  s.pending = live_.size();
  return s;
}

}  // namespace simrun::sim
