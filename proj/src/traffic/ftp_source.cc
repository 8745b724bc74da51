#include "simrun/traffic/ftp_source.h"

namespace simrun::traffic {

uint64_t FtpSource::Fill(tcp::TcpSender& sender, SimTime now) {
  if (now < start_) return 0;
  const uint64_t mss = sender.config().mss;
  const uint64_t room = sender.NewDataRoom();
  const uint64_t target = (room / mss + 1) * mss;
  const uint64_t unsent = sender.unsent_bytes();
  if (unsent >= target) return 0;
  // Unsent data is always a whole number of segments.
  const uint64_t add = target - unsent;
  sender.Write(add);
  offered_ += add;
  return add;
}

}  // namespace simrun::traffic
