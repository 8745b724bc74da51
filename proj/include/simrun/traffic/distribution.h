#ifndef SIMRUN_TRAFFIC_DISTRIBUTION_H_
#define SIMRUN_TRAFFIC_DISTRIBUTION_H_

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "simrun/config_error.h"

namespace simrun::traffic {

using Rng = std::mt19937_64;

// Seed of an independent stream derived from a master seed and a stream
// name. Adding streams never changes the draws of existing ones.
uint64_t SubstreamSeed(uint64_t master_seed, std::string_view stream);

enum class ComponentKind : uint8_t {
  kDeterministic,
  kWeibull,
  kLognormal,
  kNormal,
};

const char* ComponentKindName(ComponentKind kind);

struct Component {
  ComponentKind kind = ComponentKind::kDeterministic;
  // deterministic: value | weibull: shape, scale | lognormal: mu, sigma |
  // normal: mean, stddev
  double p1 = 0.0;
  double p2 = 0.0;
  double weight = 1.0;

  static Component Deterministic(double value, double weight = 1.0) {
    return {ComponentKind::kDeterministic, value, 0.0, weight};
  }
  static Component Weibull(double shape, double scale, double weight = 1.0) {
    return {ComponentKind::kWeibull, shape, scale, weight};
  }
  static Component Lognormal(double mu, double sigma, double weight = 1.0) {
    return {ComponentKind::kLognormal, mu, sigma, weight};
  }
  static Component Normal(double mean, double stddev, double weight = 1.0) {
    return {ComponentKind::kNormal, mean, stddev, weight};
  }

  // Untruncated analytic mean and variance.
  double Mean() const;
  double Variance() const;
};

// Weighted mixture of positive-valued components. A draw picks a component
// by weight and samples it; Normal components are re-drawn until positive.
class MixtureDistribution {
 public:
  MixtureDistribution() = default;
  // Throws ConfigError on bad weights or parameters.
  explicit MixtureDistribution(std::vector<Component> components);

  double Sample(Rng& rng) const;
  double Mean() const;
  const std::vector<Component>& components() const { return components_; }
  size_t CountOf(ComponentKind kind) const;

 private:
  std::vector<Component> components_;
  std::vector<double> cumulative_;
};

double SampleComponent(const Component& c, Rng& rng);

// Finite set of values with probabilities.
class DiscreteDistribution {
 public:
  DiscreteDistribution() = default;
  // Throws ConfigError unless probabilities are in (0,1] and sum to 1.
  explicit DiscreteDistribution(
      std::vector<std::pair<uint32_t, double>> values);

  uint32_t Sample(Rng& rng) const;
  double Mean() const;
  const std::vector<std::pair<uint32_t, double>>& values() const {
    return values_;
  }

 private:
  std::vector<std::pair<uint32_t, double>> values_;
  std::vector<double> cumulative_;
};

// JSON forms used by the traffic parameter file.
Component ComponentFromJson(const nlohmann::json& j, const std::string& path);
nlohmann::json ComponentToJson(const Component& c);

}  // namespace simrun::traffic

#endif  // SIMRUN_TRAFFIC_DISTRIBUTION_H_
