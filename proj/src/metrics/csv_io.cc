#include "simrun/metrics/csv_io.h"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string_view>

namespace simrun::metrics {
namespace {

constexpr const char* kCwndHeader = "time_s,cwnd_segments,ssthresh_segments";
constexpr const char* kDelayHeader = "enqueue_time_s,delay_s";
constexpr const char* kQueueHeader =
    "time_s,occupancy_pkts,occupancy_bytes,drops_cum";
constexpr const char* kPacketHeader = "time_s,wire_bytes,direction";

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File OpenForWrite(const std::string& path, const char* header) {
  File f(std::fopen(path.c_str(), "w"));
  if (!f) throw std::runtime_error("cannot write " + path);
  std::fprintf(f.get(), "%s\n", header);
  return f;
}

void Close(File f, const std::string& path) {
  if (std::ferror(f.get()) || std::fclose(f.release()) != 0)
    throw std::runtime_error("write failed: " + path);
}

std::string Sec(SimTime t) { return FormatSeconds(t); }

std::vector<std::string_view> Split(std::string_view line) {
  std::vector<std::string_view> out;
  size_t pos = 0;
  for (;;) {
    const size_t comma = line.find(',', pos);
    out.push_back(line.substr(pos, comma - pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

class Reader {
 public:
  Reader(const std::string& path, const char* header, size_t columns)
      : path_(path), in_(path), columns_(columns) {
    if (!in_) throw std::runtime_error("cannot read " + path);
    std::string line;
    if (!std::getline(in_, line) || line != header)
      throw std::runtime_error(path + ": expected header '" + header + "'");
  }

  // False at end of file.
  bool Next(std::vector<std::string_view>& fields) {
    if (!std::getline(in_, line_)) return false;
    ++row_;
    fields = Split(line_);
    if (fields.size() != columns_) Fail("wrong column count");
    return true;
  }

  SimTime Time(std::string_view s) {
    auto t = ParseSeconds(s);
    if (!t) Fail("bad time '" + std::string(s) + "'");
    return *t;
  }
  uint64_t Unsigned(std::string_view s) {
    uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
      Fail("bad integer '" + std::string(s) + "'");
    return v;
  }
  double Real(std::string_view s) {
    const std::string str(s);
    char* end = nullptr;
    const double v = std::strtod(str.c_str(), &end);
    if (str.empty() || *end != '\0') Fail("bad number '" + str + "'");
    return v;
  }
  [[noreturn]] void Fail(const std::string& why) {
    throw std::runtime_error(path_ + ":" + std::to_string(row_ + 1) + ": " +
                             why);
  }

 private:
  std::string path_;
  std::ifstream in_;
  size_t columns_;
  std::string line_;
  size_t row_ = 0;
};

}  // namespace

void WriteCwndCsv(const std::string& path, const std::vector<CwndPoint>& rows) {
  File f = OpenForWrite(path, kCwndHeader);
  for (const CwndPoint& r : rows)
    std::fprintf(f.get(), "%s,%.6f,%.6f\n", Sec(r.t).c_str(), r.cwnd,
                 r.ssthresh);
  Close(std::move(f), path);
}

void WriteDelayCsv(const std::string& path,
                   const std::vector<DelaySample>& rows) {
  File f = OpenForWrite(path, kDelayHeader);
  for (const DelaySample& r : rows)
    std::fprintf(f.get(), "%s,%s\n", Sec(r.t_enqueued).c_str(),
                 Sec(r.delay).c_str());
  Close(std::move(f), path);
}

void WriteQueueCsv(const std::string& path,
                   const std::vector<QueuePoint>& rows) {
  File f = OpenForWrite(path, kQueueHeader);
  for (const QueuePoint& r : rows)
    std::fprintf(f.get(), "%s,%u,%llu,%llu\n", Sec(r.t).c_str(), r.pkts,
                 static_cast<unsigned long long>(r.bytes),
                 static_cast<unsigned long long>(r.drops_cum));
  Close(std::move(f), path);
}

void WritePacketLogCsv(const std::string& path,
                       const std::vector<PacketRecord>& rows) {
  File f = OpenForWrite(path, kPacketHeader);
  for (const PacketRecord& r : rows)
    std::fprintf(f.get(), "%s,%u,%s\n", Sec(r.t).c_str(), r.wire_bytes,
                 net::DirectionName(r.direction));
  Close(std::move(f), path);
}

std::vector<CwndPoint> ReadCwndCsv(const std::string& path) {
  Reader r(path, kCwndHeader, 3);
  std::vector<CwndPoint> out;
  std::vector<std::string_view> f;
  while (r.Next(f)) out.push_back({r.Time(f[0]), r.Real(f[1]), r.Real(f[2])});
  return out;
}

std::vector<DelaySample> ReadDelayCsv(const std::string& path) {
  Reader r(path, kDelayHeader, 2);
  std::vector<DelaySample> out;
  std::vector<std::string_view> f;
  while (r.Next(f)) out.push_back({r.Time(f[0]), r.Time(f[1])});
  return out;
}

std::vector<QueuePoint> ReadQueueCsv(const std::string& path) {
  Reader r(path, kQueueHeader, 4);
  std::vector<QueuePoint> out;
  std::vector<std::string_view> f;
  while (r.Next(f))
    out.push_back({r.Time(f[0]), static_cast<uint32_t>(r.Unsigned(f[1])),
                   r.Unsigned(f[2]), r.Unsigned(f[3])});
  return out;
}

std::vector<PacketRecord> ReadPacketLogCsv(const std::string& path) {
  Reader r(path, kPacketHeader, 3);
  std::vector<PacketRecord> out;
  std::vector<std::string_view> f;
  while (r.Next(f)) {
    net::Direction d;
    if (f[2] == net::DirectionName(net::Direction::kUplink)) {
      d = net::Direction::kUplink;
    } else if (f[2] == net::DirectionName(net::Direction::kDownlink)) {
      d = net::Direction::kDownlink;
    } else {
      r.Fail("bad direction '" + std::string(f[2]) + "'");
    }
    out.push_back(
        {r.Time(f[0]), static_cast<uint32_t>(r.Unsigned(f[1])), d});
  }
  return out;
}

}  // namespace simrun::metrics
