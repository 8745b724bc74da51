#ifndef SIMRUN_TRAFFIC_FTP_SOURCE_H_
#define SIMRUN_TRAFFIC_FTP_SOURCE_H_

#include <cstdint>

#include "simrun/sim/sim_time.h"
#include "simrun/tcp/tcp_sender.h"

namespace simrun::traffic {

// Infinite-backlog bulk upload. Keeps the sender's unsent buffer at least
// one MSS beyond what the window could take, in whole-MSS units, so the
// sender is window-limited and emits only full-size segments.
class FtpSource {
 public:
  explicit FtpSource(SimTime start) : start_(start) {}

  // Returns the bytes written into the sender by this call.
  uint64_t Fill(tcp::TcpSender& sender, SimTime now);

  SimTime start() const { return start_; }
  bool started(SimTime now) const { return now >= start_; }
  uint64_t offered() const { return offered_; }

 private:
  SimTime start_;
  uint64_t offered_ = 0;
};

}  // namespace simrun::traffic

#endif  // SIMRUN_TRAFFIC_FTP_SOURCE_H_
