#ifndef SIMRUN_TCP_TCP_CONFIG_H_
#define SIMRUN_TCP_TCP_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string_view>

#include "simrun/sim/sim_time.h"

namespace simrun::tcp {

enum class Variant : uint8_t { kSack, kNewReno, kVegas };

// "sack", "newreno", "vegas".
const char* VariantName(Variant v);
std::optional<Variant> ParseVariant(std::string_view name);

enum class Mode : uint8_t { kOpen, kFastRecovery, kRtoRecovery };
const char* ModeName(Mode m);

struct SenderConfig {
  Variant variant = Variant::kSack;
  uint32_t mss = 1460;
  // Window quantities are in segments of `mss` bytes.
  double initial_cwnd = 2.0;
  double adv_window = 64.0;
  // 0 means "start at adv_window".
  double initial_ssthresh = 0.0;
  uint32_t dupack_threshold = 3;

  SimTime initial_rto = SimTime::FromWholeSeconds(1);
  SimTime min_rto = SimTime::Millis(200);
  SimTime max_rto = SimTime::FromWholeSeconds(60);
  uint32_t max_backoff = 64;

  double vegas_alpha = 1.0;
  double vegas_beta = 3.0;
  double vegas_gamma = 1.0;

  // When set, segments carry real payload bytes generated from this salt
  // so receivers can check the delivered stream byte for byte.
  std::optional<uint64_t> content_salt;
};

// Deterministic content of stream byte `offset` for a given salt.
uint8_t StreamByte(uint64_t salt, uint64_t offset);

}  // namespace simrun::tcp

#endif  // SIMRUN_TCP_TCP_CONFIG_H_
