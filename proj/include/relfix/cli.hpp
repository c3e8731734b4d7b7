#pragma once

// Command-line front end. Everything a run produces goes through one JSON
// document (or its CSV flattening); diagnostics go to the error stream only.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "relfix/group.hpp"
#include "relfix/relcayley.hpp"
#include "relfix/report.hpp"

namespace relfix {

struct RunConfig {
  // Subcommand path, e.g. "fix enumerate".
  std::string command;
  std::string group_path;
  std::string aut;
  DomainWindow window{3, 3};
  std::vector<std::string> suites;
  std::size_t samples = 200;
  std::optional<std::uint64_t> seed;
  // Not part of the report, so two runs differing only in output path agree.
  std::string out;
  std::string format = "json";
  int bfs_radius_cap = 10;
  std::size_t state_cap = 4'000'000;
  std::size_t label_cap = 64;
  // 0: the default of induced_peripherals.
  std::size_t threshold = 0;
  // Probe parameters.
  Rational kappa{1};
  Rational c{0};
  Coord k = 0;
  Coord e = 0;
  Coord r = 1;
  Coord theta = 0;
  // Negative: max rel_length over the fixed sample.
  Coord bgen_p = -1;

  Json to_json() const;
};

/// FNV-1a of the group's canonical text, 16 hex digits.
std::string group_digest(GroupSpec const& spec);

/// {tool_version, config, group_digest, per_check[]}.
Json emit_report(RunConfig const& config, GroupSpec const& spec,
                 std::vector<ProbeReport> const& reports);

/// qc_profile reports flatten to their (window, sigma) ladder; anything else
/// to one row per estimate.
std::string emit_csv(std::vector<ProbeReport> const& reports);

/// Exit status: 0 clean, 1 violations (report still written), 2 input errors.
int run_command(std::vector<std::string> const& args, std::ostream& out, std::ostream& err);

char const* tool_version();

}  // namespace relfix
