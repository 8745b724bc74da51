#include "simrun/metrics/summary_stats.h"

#include <algorithm>
#include <cmath>

namespace simrun::metrics {

void MeasurementWindow::Validate() const {
  if (start >= end)
    throw ConfigError("measurement_window: start must be before end");
}

std::optional<DelayStats> SummarizeDelays(
    const std::vector<DelaySample>& samples, const MeasurementWindow& window) {
  window.Validate();
  std::vector<int64_t> ns;
  for (const DelaySample& s : samples)
    if (window.Contains(s.t_enqueued)) ns.push_back(s.delay.ns());
  if (ns.empty()) return std::nullopt;
  std::sort(ns.begin(), ns.end());

  __int128 sum = 0;
  for (int64_t v : ns) sum += v;
  const size_t n = ns.size();
  DelayStats st;
  st.count = n;
  st.mean_s = static_cast<double>(static_cast<long double>(sum) / n) * 1e-9;
  st.median_s = (n % 2 == 1)
                    ? ns[n / 2] * 1e-9
                    : (static_cast<double>(ns[n / 2 - 1]) + ns[n / 2]) * 0.5e-9;
  const size_t rank =
      static_cast<size_t>(std::ceil(0.95 * static_cast<double>(n)));
  st.p95_s = ns[std::max<size_t>(rank, 1) - 1] * 1e-9;
  st.max_s = ns.back() * 1e-9;
  return st;
}

std::optional<double> TimeWeightedMeanCwnd(const std::vector<CwndPoint>& trace,
                                           const MeasurementWindow& window) {
  window.Validate();
  long double area = 0;
  int64_t covered = 0;
  for (size_t i = 0; i < trace.size(); ++i) {
    const SimTime from = std::max(trace[i].t, window.start);
    const SimTime to =
        std::min(i + 1 < trace.size() ? trace[i + 1].t : window.end,
                 window.end);
    if (to <= from) continue;
    const int64_t span = (to - from).ns();
    area += static_cast<long double>(trace[i].cwnd) * span;
    covered += span;
  }
  if (covered == 0) return std::nullopt;
  return static_cast<double>(area / covered);
}

double AnalyticDelayOracle(double window_segments, uint32_t wire_bytes,
                           int64_t rate_bps, double base_rtt_s) {
  const double drain =
      window_segments * wire_bytes * 8.0 / static_cast<double>(rate_bps);
  // A window equal to the BDP up to rounding has no standing queue.
  if (drain - base_rtt_s <= 1e-12 * std::max(drain, base_rtt_s)) return 0.0;
  return drain - base_rtt_s;
}

}  // namespace simrun::metrics
