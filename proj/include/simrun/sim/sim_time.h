#ifndef SIMRUN_SIM_SIM_TIME_H_
#define SIMRUN_SIM_SIM_TIME_H_

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

namespace simrun {

// Integer-nanosecond simulated time. Used both for instants on the
// simulation clock and for durations between them; arithmetic is exact.
class SimTime {
 public:
  constexpr SimTime() = default;

  static constexpr SimTime Nanos(int64_t ns) { return SimTime(ns); }
  static constexpr SimTime Micros(int64_t us) { return SimTime(us * 1000); }
  static constexpr SimTime Millis(int64_t ms) {
    return SimTime(ms * 1000000);
  }
  static constexpr SimTime FromWholeSeconds(int64_t s) {
    return SimTime(s * 1000000000);
  }
  // Rounds to the nearest nanosecond.
  static SimTime Seconds(double s);
  static constexpr SimTime Zero() { return SimTime(0); }
  static constexpr SimTime Max() {
    return SimTime(std::numeric_limits<int64_t>::max());
  }

  constexpr int64_t ns() const { return ns_; }
  constexpr double seconds() const { return static_cast<double>(ns_) / 1e9; }

  constexpr SimTime operator+(SimTime o) const { return SimTime(ns_ + o.ns_); }
  constexpr SimTime operator-(SimTime o) const { return SimTime(ns_ - o.ns_); }
  constexpr SimTime operator*(int64_t k) const { return SimTime(ns_ * k); }
  constexpr SimTime& operator+=(SimTime o) {
    ns_ += o.ns_;
    return *this;
  }
  constexpr SimTime& operator-=(SimTime o) {
    ns_ -= o.ns_;
    return *this;
  }
  constexpr auto operator<=>(const SimTime&) const = default;

 private:
  constexpr explicit SimTime(int64_t ns) : ns_(ns) {}
  int64_t ns_ = 0;
};

// Fixed 9-decimal rendering, e.g. "23.437500000". Exact for every value.
std::string FormatSeconds(SimTime t);

// Inverse of FormatSeconds. Accepts up to 9 fractional digits and an
// optional leading '-'; anything else yields nullopt.
std::optional<SimTime> ParseSeconds(std::string_view text);

}  // namespace simrun

#endif  // SIMRUN_SIM_SIM_TIME_H_
