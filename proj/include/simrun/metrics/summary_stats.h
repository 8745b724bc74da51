#ifndef SIMRUN_METRICS_SUMMARY_STATS_H_
#define SIMRUN_METRICS_SUMMARY_STATS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "simrun/config_error.h"
#include "simrun/sim/sim_time.h"

namespace simrun::metrics {

// Half-open [start, end).
struct MeasurementWindow {
  SimTime start;
  SimTime end;

  // Throws ConfigError when start >= end.
  void Validate() const;
  bool Contains(SimTime t) const { return t >= start && t < end; }
  SimTime length() const { return end - start; }
};

struct DelaySample {
  SimTime t_enqueued;
  // Start of transmission minus t_enqueued.
  SimTime delay;
};

struct DelayStats {
  uint64_t count = 0;
  double mean_s = 0.0;
  double median_s = 0.0;
  double p95_s = 0.0;  // nearest-rank
  double max_s = 0.0;
};

// Statistics over the samples enqueued inside the window; nullopt when the
// window holds no sample.
std::optional<DelayStats> SummarizeDelays(
    const std::vector<DelaySample>& samples, const MeasurementWindow& window);

struct CwndPoint {
  SimTime t;
  double cwnd = 0.0;
  double ssthresh = 0.0;
};

// Time average of a step function given by change points. Before its first
// point the trace has no value; that part of the window is not counted.
std::optional<double> TimeWeightedMeanCwnd(const std::vector<CwndPoint>& trace,
                                           const MeasurementWindow& window);

// Steady self-queuing delay of one bulk flow pinned at a window of
// `window_segments` packets of `wire_bytes` on a bottleneck of `rate_bps`:
// max(0, W * wire_bytes * 8 / rate_bps - base_rtt), in seconds.
double AnalyticDelayOracle(double window_segments, uint32_t wire_bytes,
                           int64_t rate_bps, double base_rtt_s);

}  // namespace simrun::metrics

#endif  // SIMRUN_METRICS_SUMMARY_STATS_H_
