#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace relfix {

using Json = nlohmann::json;

/// Outcome of one empirical check. Estimates are maxima over the sample;
/// `vacuous` marks runs with nothing to check, which are not evidence.
struct ProbeReport {
  std::string check;
  Json params = Json::object();
  std::uint64_t samples = 0;
  std::map<std::string, std::int64_t> estimates;
  std::vector<std::string> violations;
  bool vacuous = false;
  std::uint64_t seed = 0;
  // Witnesses and counters.
  Json details = Json::object();

  bool ok() const { return violations.empty(); }
  void raise(std::string const& key, std::int64_t value);
};

Json to_json(ProbeReport const& report);
ProbeReport report_from_json(Json const& j);

}  // namespace relfix
