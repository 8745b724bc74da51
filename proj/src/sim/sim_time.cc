#include "simrun/sim/sim_time.h"

#include <cmath>
#include <cstdio>

namespace simrun {

SimTime SimTime::Seconds(double s) {
  return SimTime(static_cast<int64_t>(std::llround(s * 1e9)));
}

std::string FormatSeconds(SimTime t) {
  int64_t ns = t.ns();
  const bool negative = ns < 0;
  // Magnitude as unsigned so INT64_MIN does not overflow.
  uint64_t mag = negative ? 0 - static_cast<uint64_t>(ns)
                          : static_cast<uint64_t>(ns);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%s%llu.%09llu", negative ? "-" : "",
                static_cast<unsigned long long>(mag / 1000000000ULL),
                static_cast<unsigned long long>(mag % 1000000000ULL));
  return buf;
}

std::optional<SimTime> ParseSeconds(std::string_view text) {
  bool negative = false;
  if (!text.empty() && text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  if (text.empty()) return std::nullopt;
  int64_t whole = 0;
  size_t i = 0;
  bool any_digit = false;
  for (; i < text.size() && text[i] != '.'; ++i) {
    char c = text[i];
    if (c < '0' || c > '9') return std::nullopt;
    if (whole > (std::numeric_limits<int64_t>::max() / 10) / 1000000000)
      return std::nullopt;
    whole = whole * 10 + (c - '0');
    any_digit = true;
  }
  int64_t frac = 0;
  int frac_digits = 0;
  if (i < text.size()) {
    ++i;  // '.'
    for (; i < text.size(); ++i) {
      char c = text[i];
      if (c < '0' || c > '9' || frac_digits == 9) return std::nullopt;
      frac = frac * 10 + (c - '0');
      ++frac_digits;
      any_digit = true;
    }
  }
  if (!any_digit) return std::nullopt;
  for (; frac_digits < 9; ++frac_digits) frac *= 10;
  int64_t ns = whole * 1000000000 + frac;
  return SimTime::Nanos(negative ? -ns : ns);
}

}  // namespace simrun
