#include "relfix/report.hpp"

#include <algorithm>

namespace relfix {

void ProbeReport::raise(std::string const& key, std::int64_t value) {
  auto [it, fresh] = estimates.emplace(key, value);
  if (!fresh) it->second = std::max(it->second, value);
}

Json to_json(ProbeReport const& report) {
  Json j;
  j["name"] = report.check;
  j["params"] = report.params;
  j["samples"] = report.samples;
  j["estimate"] = Json::object();
  for (auto const& [k, v] : report.estimates) j["estimate"][k] = v;
  j["violations"] = report.violations;
  j["vacuous"] = report.vacuous;
  j["seed"] = report.seed;
  j["details"] = report.details;
  return j;
}

ProbeReport report_from_json(Json const& j) {
  ProbeReport r;
  r.check = j.at("name").get<std::string>();
  r.params = j.at("params");
  r.samples = j.at("samples").get<std::uint64_t>();
  for (auto const& [k, v] : j.at("estimate").items()) r.estimates[k] = v.get<std::int64_t>();
  r.violations = j.at("violations").get<std::vector<std::string>>();
  r.vacuous = j.at("vacuous").get<bool>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.details = j.value("details", Json::object());
  return r;
}

}  // namespace relfix
