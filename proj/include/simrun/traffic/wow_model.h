#ifndef SIMRUN_TRAFFIC_WOW_MODEL_H_
#define SIMRUN_TRAFFIC_WOW_MODEL_H_

#include <cstdint>
#include <string>

#include "json.hpp"
#include "simrun/sim/sim_time.h"
#include "simrun/traffic/distribution.h"

namespace simrun::traffic {

// APDU size and inter-arrival marginals of the WoW "Questing" activity.
//
// Structure is fixed: 8 discrete client sizes, client inter-arrivals from
// 2 Weibull + 2 deterministic components, Lognormal server sizes, server
// inter-arrivals from 1 Normal + 1 Weibull + 3 deterministic components.
struct WowModel {
  DiscreteDistribution client_size;
  MixtureDistribution client_iat;
  Component server_size;  // kind == kLognormal, weight unused
  MixtureDistribution server_iat;

  // Throws ConfigError if the component structure differs from the above.
  void Validate() const;

  double ClientMeanIat() const { return client_iat.Mean(); }
  double ServerMeanIat() const { return server_iat.Mean(); }
  double ClientMeanBytes() const { return client_size.Mean(); }
  double ServerMeanBytes() const { return server_size.Mean(); }
  // Application-layer rates in bit/s.
  double ClientAppRateBps() const {
    return 8.0 * ClientMeanBytes() / ClientMeanIat();
  }
  double ServerAppRateBps() const {
    return 8.0 * ServerMeanBytes() / ServerMeanIat();
  }
};

// Parameters shipped with the tool; identical to config/wow_questing.json.
WowModel DefaultQuestingModel();

// Parameter file schema:
//   { "client": { "apdu_size": [ {"bytes": n, "probability": p}, x8 ],
//                 "iat": [ component, ... ] },
//     "server": { "apdu_size": lognormal component,
//                 "iat": [ component, ... ] } }
// where a component is {"kind": ..., <params>, "weight": w}. "comment" keys
// are accepted anywhere. Errors name the offending key path.
WowModel WowModelFromJson(const nlohmann::json& j);
nlohmann::json WowModelToJson(const WowModel& model);
WowModel LoadWowModel(const std::string& path);

enum class Side : uint8_t { kClient, kServer };

struct Apdu {
  SimTime wait;  // delay before this APDU is handed to TCP
  uint32_t bytes = 0;
};

// Draws the APDU sequence of one side from its own RNG stream.
class WowGenerator {
 public:
  WowGenerator(const WowModel& model, Side side, uint64_t seed);

  Apdu Next();
  Side side() const { return side_; }

 private:
  WowModel model_;
  Side side_;
  Rng rng_;
};

}  // namespace simrun::traffic

#endif  // SIMRUN_TRAFFIC_WOW_MODEL_H_
