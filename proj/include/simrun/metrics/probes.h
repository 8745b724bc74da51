#ifndef SIMRUN_METRICS_PROBES_H_
#define SIMRUN_METRICS_PROBES_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "simrun/metrics/summary_stats.h"
#include "simrun/net/packet.h"
#include "simrun/sim/sim_time.h"

namespace simrun::metrics {

class DelayRecorder {
 public:
  void Record(SimTime t_enqueued, SimTime t_start_tx) {
    samples_.push_back({t_enqueued, t_start_tx - t_enqueued});
  }
  const std::vector<DelaySample>& samples() const { return samples_; }

 private:
  std::vector<DelaySample> samples_;
};

class CwndTrace {
 public:
  void Add(SimTime t, double cwnd, double ssthresh) {
    points_.push_back({t, cwnd, ssthresh});
  }
  const std::vector<CwndPoint>& points() const { return points_; }

 private:
  std::vector<CwndPoint> points_;
};

struct QueuePoint {
  SimTime t;
  uint32_t pkts = 0;
  uint64_t bytes = 0;
  uint64_t drops_cum = 0;
};

class QueueTrace {
 public:
  void Add(SimTime t, uint32_t pkts, uint64_t bytes, uint64_t drops) {
    points_.push_back({t, pkts, bytes, drops});
  }
  const std::vector<QueuePoint>& points() const { return points_; }

 private:
  std::vector<QueuePoint> points_;
};

// Time average over the window of the wait a packet arriving at instant t
// would see before its own transmission starts:
//   V(t) = max(0, busy_until - t) + serialization of the queued packets.
// Fed by every backlog change of one port; exact in integer nanoseconds.
class VirtualDelayIntegrator {
 public:
  explicit VirtualDelayIntegrator(const MeasurementWindow& window);

  void Update(SimTime now, SimTime busy_until, SimTime queued);
  // Integrates the current state up to `now` (normally the window end).
  void Finish(SimTime now);
  // Mean over the part of the window integrated so far.
  std::optional<double> MeanSeconds() const;

 private:
  void Advance(SimTime to);

  MeasurementWindow window_;
  SimTime last_t_;
  SimTime busy_until_;
  SimTime queued_;
  __int128 twice_area_ = 0;  // ns^2, doubled to stay integral
  int64_t covered_ns_ = 0;
};

struct PacketRecord {
  SimTime t;
  uint32_t wire_bytes = 0;
  net::Direction direction = net::Direction::kUplink;
};

}  // namespace simrun::metrics

#endif  // SIMRUN_METRICS_PROBES_H_
