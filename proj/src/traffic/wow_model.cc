#include "simrun/traffic/wow_model.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace simrun::traffic {
namespace {

using nlohmann::json;

void RejectUnknown(const json& j, const std::string& path,
                   const std::set<std::string>& allowed) {
  for (const auto& [key, _] : j.items()) {
    if (key != "comment" && !allowed.count(key))
      throw ConfigError(path + "." + key + ": unknown key");
  }
}

const json& Require(const json& j, const std::string& path, const char* key) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  if (!j.contains(key)) throw ConfigError(path + "." + key + ": missing");
  return j.at(key);
}

MixtureDistribution MixtureFromJson(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path + ": expected an array");
  std::vector<Component> components;
  for (size_t i = 0; i < j.size(); ++i)
    components.push_back(
        ComponentFromJson(j[i], path + "[" + std::to_string(i) + "]"));
  try {
    return MixtureDistribution(std::move(components));
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

DiscreteDistribution SizesFromJson(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path + ": expected an array");
  std::vector<std::pair<uint32_t, double>> values;
  for (size_t i = 0; i < j.size(); ++i) {
    const std::string at = path + "[" + std::to_string(i) + "]";
    const json& bytes = Require(j[i], at, "bytes");
    const json& prob = Require(j[i], at, "probability");
    RejectUnknown(j[i], at, {"bytes", "probability"});
    if (!bytes.is_number_unsigned() || bytes.get<uint64_t>() == 0 ||
        bytes.get<uint64_t>() > 65535)
      throw ConfigError(at + ".bytes: expected an integer in [1, 65535]");
    if (!prob.is_number())
      throw ConfigError(at + ".probability: expected a number");
    values.emplace_back(bytes.get<uint32_t>(), prob.get<double>());
  }
  try {
    return DiscreteDistribution(std::move(values));
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace

void WowModel::Validate() const {
  if (client_size.values().size() != 8)
    throw ConfigError("client.apdu_size: exactly 8 sizes required");
  const auto& ci = client_iat;
  if (ci.components().size() != 4 || ci.CountOf(ComponentKind::kWeibull) != 2 ||
      ci.CountOf(ComponentKind::kDeterministic) != 2)
    throw ConfigError(
        "client.iat: expected 2 weibull and 2 deterministic components");
  if (server_size.kind != ComponentKind::kLognormal)
    throw ConfigError("server.apdu_size: expected a lognormal component");
  const auto& si = server_iat;
  if (si.components().size() != 5 || si.CountOf(ComponentKind::kNormal) != 1 ||
      si.CountOf(ComponentKind::kWeibull) != 1 ||
      si.CountOf(ComponentKind::kDeterministic) != 3)
    throw ConfigError(
        "server.iat: expected 1 normal, 1 weibull and 3 deterministic "
        "components");
}

WowModel DefaultQuestingModel() {
  WowModel m;
  m.client_size = DiscreteDistribution({{6, 0.10},
                                        {10, 0.18},
                                        {14, 0.20},
                                        {20, 0.16},
                                        {28, 0.12},
                                        {44, 0.10},
                                        {88, 0.08},
                                        {210, 0.06}});
  m.client_iat = MixtureDistribution({Component::Weibull(0.8, 0.045, 0.30),
                                      Component::Weibull(1.5, 0.275842, 0.30),
                                      Component::Deterministic(0.2, 0.25),
                                      Component::Deterministic(0.1, 0.15)});
  m.server_size = Component::Lognormal(std::log(120.0), 0.9);
  m.server_iat = MixtureDistribution({Component::Normal(0.2, 0.05, 0.25),
                                      Component::Weibull(0.7, 0.04, 0.35),
                                      Component::Deterministic(0.05, 0.15),
                                      Component::Deterministic(0.1, 0.15),
                                      Component::Deterministic(0.25, 0.10)});
  return m;
}

WowModel WowModelFromJson(const json& j) {
  if (!j.is_object()) throw ConfigError("traffic: expected an object");
  RejectUnknown(j, "traffic", {"client", "server"});
  const json& client = Require(j, "traffic", "client");
  const json& server = Require(j, "traffic", "server");
  RejectUnknown(client, "client", {"apdu_size", "iat"});
  RejectUnknown(server, "server", {"apdu_size", "iat"});

  WowModel m;
  m.client_size =
      SizesFromJson(Require(client, "client", "apdu_size"), "client.apdu_size");
  m.client_iat = MixtureFromJson(Require(client, "client", "iat"), "client.iat");
  m.server_size = ComponentFromJson(Require(server, "server", "apdu_size"),
                                    "server.apdu_size");
  m.server_iat = MixtureFromJson(Require(server, "server", "iat"), "server.iat");
  m.Validate();
  return m;
}

json WowModelToJson(const WowModel& m) {
  json sizes = json::array();
  for (const auto& [bytes, p] : m.client_size.values())
    sizes.push_back({{"bytes", bytes}, {"probability", p}});
  auto mixture = [](const MixtureDistribution& d) {
    json out = json::array();
    for (const Component& c : d.components()) out.push_back(ComponentToJson(c));
    return out;
  };
  json server_size = ComponentToJson(m.server_size);
  server_size.erase("weight");
  return {{"client", {{"apdu_size", sizes}, {"iat", mixture(m.client_iat)}}},
          {"server",
           {{"apdu_size", server_size}, {"iat", mixture(m.server_iat)}}}};
}

WowModel LoadWowModel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("traffic file '" + path + "': cannot open");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("traffic file '" + path + "': " + e.what());
  }
  return WowModelFromJson(j);
}

WowGenerator::WowGenerator(const WowModel& model, Side side, uint64_t seed)
    : model_(model), side_(side), rng_(seed) {}

Apdu WowGenerator::Next() {
  Apdu a;
  if (side_ == Side::kClient) {
    a.wait = SimTime::Seconds(model_.client_iat.Sample(rng_));
    a.bytes = model_.client_size.Sample(rng_);
  } else {
    a.wait = SimTime::Seconds(model_.server_iat.Sample(rng_));
    const double bytes = SampleComponent(model_.server_size, rng_);
    a.bytes = static_cast<uint32_t>(
        std::clamp<double>(std::llround(bytes), 1.0, 1 << 20));
  }
  return a;
}

}  // namespace simrun::traffic
