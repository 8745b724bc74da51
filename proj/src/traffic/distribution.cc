#include "simrun/traffic/distribution.h"

#include <algorithm>
#include <cmath>
#include <set>

namespace simrun::traffic {
namespace {

constexpr double kWeightTolerance = 1e-9;
constexpr int kMaxRedraws = 100000;

uint64_t SplitMix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<double> Cumulative(const std::vector<double>& weights,
                               const std::string& what) {
  double sum = 0.0;
  std::vector<double> cumulative;
  for (size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (!(w > 0.0 && w <= 1.0)) {
      throw ConfigError(what + "[" + std::to_string(i) +
                        "]: weight must be in (0, 1]");
    }
    sum += w;
    cumulative.push_back(sum);
  }
  if (weights.empty()) throw ConfigError(what + ": no components");
  if (std::fabs(sum - 1.0) > kWeightTolerance) {
    throw ConfigError(what + ": weights sum to " + std::to_string(sum) +
                      ", expected 1");
  }
  cumulative.back() = 1.0;
  return cumulative;
}

size_t Pick(const std::vector<double>& cumulative, Rng& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double u = u01(rng);
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return std::min<size_t>(it - cumulative.begin(), cumulative.size() - 1);
}

void ValidateComponent(const Component& c, const std::string& where) {
  auto fail = [&](const char* msg) { throw ConfigError(where + ": " + msg); };
  if (!std::isfinite(c.p1) || !std::isfinite(c.p2))
    fail("parameters must be finite");
  switch (c.kind) {
    case ComponentKind::kDeterministic:
      if (c.p1 <= 0) fail("deterministic value must be > 0");
      break;
    case ComponentKind::kWeibull:
      if (c.p1 <= 0) fail("weibull shape must be > 0");
      if (c.p2 <= 0) fail("weibull scale must be > 0");
      break;
    case ComponentKind::kLognormal:
      if (c.p2 < 0) fail("lognormal sigma must be >= 0");
      break;
    case ComponentKind::kNormal:
      if (c.p2 < 0) fail("normal stddev must be >= 0");
      // Truncation re-draws until positive; demand a usable positive tail.
      if (c.p1 + 4.0 * c.p2 <= 0 || (c.p2 == 0 && c.p1 <= 0))
        fail("normal component has (almost) no positive mass");
      break;
  }
}

}  // namespace

uint64_t SubstreamSeed(uint64_t master_seed, std::string_view stream) {
  uint64_t h = 14695981039346656037ULL;  // FNV-1a
  for (char ch : stream) {
    h ^= static_cast<uint8_t>(ch);
    h *= 1099511628211ULL;
  }
  return SplitMix64(master_seed ^ SplitMix64(h));
}

const char* ComponentKindName(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::kDeterministic:
      return "deterministic";
    case ComponentKind::kWeibull:
      return "weibull";
    case ComponentKind::kLognormal:
      return "lognormal";
    case ComponentKind::kNormal:
      return "normal";
  }
  return "?";
}

double Component::Mean() const {
  switch (kind) {
    case ComponentKind::kDeterministic:
      return p1;
    case ComponentKind::kWeibull:
      return p2 * std::tgamma(1.0 + 1.0 / p1);
    case ComponentKind::kLognormal:
      return std::exp(p1 + p2 * p2 / 2.0);
    case ComponentKind::kNormal:
      return p1;
  }
  return 0.0;
}

double Component::Variance() const {
  switch (kind) {
    case ComponentKind::kDeterministic:
      return 0.0;
    case ComponentKind::kWeibull: {
      const double g1 = std::tgamma(1.0 + 1.0 / p1);
      const double g2 = std::tgamma(1.0 + 2.0 / p1);
      return p2 * p2 * (g2 - g1 * g1);
    }
    case ComponentKind::kLognormal:
      return (std::exp(p2 * p2) - 1.0) * std::exp(2.0 * p1 + p2 * p2);
    case ComponentKind::kNormal:
      return p2 * p2;
  }
  return 0.0;
}

double SampleComponent(const Component& c, Rng& rng) {
  switch (c.kind) {
    case ComponentKind::kDeterministic:
      return c.p1;
    case ComponentKind::kWeibull: {
      std::uniform_real_distribution<double> u01(0.0, 1.0);
      for (int i = 0; i < kMaxRedraws; ++i) {
        const double u = 1.0 - u01(rng);  // (0, 1]
        const double x = c.p2 * std::pow(-std::log(u), 1.0 / c.p1);
        if (x > 0) return x;
      }
      break;
    }
    case ComponentKind::kLognormal: {
      if (c.p2 == 0) return std::exp(c.p1);
      std::normal_distribution<double> z(0.0, 1.0);
      return std::exp(c.p1 + c.p2 * z(rng));
    }
    case ComponentKind::kNormal: {
      if (c.p2 == 0) return c.p1;
      std::normal_distribution<double> n(c.p1, c.p2);
      for (int i = 0; i < kMaxRedraws; ++i) {
        const double x = n(rng);
        if (x > 0) return x;
      }
      break;
    }
  }
  throw std::runtime_error(std::string("no positive draw from ") +
                           ComponentKindName(c.kind) + " component");
}

MixtureDistribution::MixtureDistribution(std::vector<Component> components)
    : components_(std::move(components)) {
  std::vector<double> weights;
  for (size_t i = 0; i < components_.size(); ++i) {
    ValidateComponent(components_[i],
                      "component[" + std::to_string(i) + "]");
    weights.push_back(components_[i].weight);
  }
  cumulative_ = Cumulative(weights, "components");
}

double MixtureDistribution::Sample(Rng& rng) const {
  if (components_.size() == 1) return SampleComponent(components_[0], rng);
  return SampleComponent(components_[Pick(cumulative_, rng)], rng);
}

double MixtureDistribution::Mean() const {
  double m = 0.0;
  for (const Component& c : components_) m += c.weight * c.Mean();
  return m;
}

size_t MixtureDistribution::CountOf(ComponentKind kind) const {
  return std::count_if(components_.begin(), components_.end(),
                       [kind](const Component& c) { return c.kind == kind; });
}

DiscreteDistribution::DiscreteDistribution(
    std::vector<std::pair<uint32_t, double>> values)
    : values_(std::move(values)) {
  std::vector<double> weights;
  for (size_t i = 0; i < values_.size(); ++i) {
    if (values_[i].first == 0)
      throw ConfigError("values[" + std::to_string(i) + "]: must be > 0");
    weights.push_back(values_[i].second);
  }
  cumulative_ = Cumulative(weights, "values");
}

uint32_t DiscreteDistribution::Sample(Rng& rng) const {
  return values_[Pick(cumulative_, rng)].first;
}

double DiscreteDistribution::Mean() const {
  double m = 0.0;
  for (const auto& [v, p] : values_) m += v * p;
  return m;
}

Component ComponentFromJson(const nlohmann::json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  auto number = [&](const char* key) -> double {
    if (!j.contains(key)) throw ConfigError(path + "." + key + ": missing");
    if (!j.at(key).is_number())
      throw ConfigError(path + "." + key + ": expected a number");
    return j.at(key).get<double>();
  };
  if (!j.contains("kind") || !j.at("kind").is_string())
    throw ConfigError(path + ".kind: missing or not a string");
  const std::string kind = j.at("kind").get<std::string>();

  Component c;
  std::set<std::string> allowed = {"kind", "weight", "comment"};
  if (kind == "deterministic") {
    c = Component::Deterministic(number("value"));
    allowed.insert("value");
  } else if (kind == "weibull") {
    c = Component::Weibull(number("shape"), number("scale"));
    allowed.insert({"shape", "scale"});
  } else if (kind == "lognormal") {
    c = Component::Lognormal(number("mu"), number("sigma"));
    allowed.insert({"mu", "sigma"});
  } else if (kind == "normal") {
    c = Component::Normal(number("mean"), number("stddev"));
    allowed.insert({"mean", "stddev"});
  } else {
    throw ConfigError(path + ".kind: unknown distribution '" + kind + "'");
  }
  if (j.contains("weight")) c.weight = number("weight");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key))
      throw ConfigError(path + "." + key + ": unknown key");
  }
  ValidateComponent(c, path);
  return c;
}

nlohmann::json ComponentToJson(const Component& c) {
  nlohmann::json j;
  j["kind"] = ComponentKindName(c.kind);
  switch (c.kind) {
    case ComponentKind::kDeterministic:
      j["value"] = c.p1;
      break;
    case ComponentKind::kWeibull:
      j["shape"] = c.p1;
      j["scale"] = c.p2;
      break;
    case ComponentKind::kLognormal:
      j["mu"] = c.p1;
      j["sigma"] = c.p2;
      break;
    case ComponentKind::kNormal:
      j["mean"] = c.p1;
      j["stddev"] = c.p2;
      break;
  }
  j["weight"] = c.weight;
  return j;
}

}  // namespace simrun::traffic
