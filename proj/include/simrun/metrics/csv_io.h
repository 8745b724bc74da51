#ifndef SIMRUN_METRICS_CSV_IO_H_
#define SIMRUN_METRICS_CSV_IO_H_

#include <string>
#include <vector>

#include "simrun/metrics/probes.h"
#include "simrun/metrics/summary_stats.h"

namespace simrun::metrics {

// Column layouts (header row always written):
//   cwnd_<flow>.csv     time_s,cwnd_segments,ssthresh_segments
//   delay_<flow>.csv    enqueue_time_s,delay_s
//   queue_<name>.csv    time_s,occupancy_pkts,occupancy_bytes,drops_cum
//   packets_<flow>.csv  time_s,wire_bytes,direction
// Times carry exactly 9 decimals. Writers throw std::runtime_error on I/O
// failure; readers also throw on a header or row that does not match.
void WriteCwndCsv(const std::string& path, const std::vector<CwndPoint>& rows);
void WriteDelayCsv(const std::string& path,
                   const std::vector<DelaySample>& rows);
void WriteQueueCsv(const std::string& path,
                   const std::vector<QueuePoint>& rows);
void WritePacketLogCsv(const std::string& path,
                       const std::vector<PacketRecord>& rows);

std::vector<CwndPoint> ReadCwndCsv(const std::string& path);
std::vector<DelaySample> ReadDelayCsv(const std::string& path);
std::vector<QueuePoint> ReadQueueCsv(const std::string& path);
std::vector<PacketRecord> ReadPacketLogCsv(const std::string& path);

}  // namespace simrun::metrics

#endif  // SIMRUN_METRICS_CSV_IO_H_
