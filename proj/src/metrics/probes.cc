#include "simrun/metrics/probes.h"

#include <algorithm>

namespace simrun::metrics {

VirtualDelayIntegrator::VirtualDelayIntegrator(const MeasurementWindow& window)
    : window_(window) {}

void VirtualDelayIntegrator::Advance(SimTime to) {
  const SimTime a = std::max(last_t_, window_.start);
  const SimTime c = std::min(to, window_.end);
  if (c > a) {
    const __int128 span = (c - a).ns();
    __int128 twice = 2 * static_cast<__int128>(queued_.ns()) * span;
    if (busy_until_ > a) {
      const SimTime e = std::min(busy_until_, c);
      twice += static_cast<__int128>((busy_until_ - a).ns() +
                                     (busy_until_ - e).ns()) *
               (e - a).ns();
    }
    twice_area_ += twice;
    covered_ns_ += static_cast<int64_t>(span);
  }
  last_t_ = std::max(last_t_, to);
}

void VirtualDelayIntegrator::Update(SimTime now, SimTime busy_until,
                                    SimTime queued) {
  Advance(now);
  busy_until_ = busy_until;
  queued_ = queued;
}

void VirtualDelayIntegrator::Finish(SimTime now) { Advance(now); }

std::optional<double> VirtualDelayIntegrator::MeanSeconds() const {
  if (covered_ns_ == 0) return std::nullopt;
  const long double mean_ns = static_cast<long double>(twice_area_) /
                              (2.0L * static_cast<long double>(covered_ns_));
  return static_cast<double>(mean_ns * 1e-9L);
}

}  // namespace simrun::metrics
