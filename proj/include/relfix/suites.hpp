#pragma once

// Named verification suites. Window suites run exhaustively over every
// element of the window (pairs reduced by left translation to paths based
// at 1); suites on Fix run over the windowed fixed sample.

#include <string>
#include <string_view>
#include <vector>

#include "relfix/fixlab.hpp"

namespace relfix {

struct SuiteConfig {
  DomainWindow window{3, 3};
  std::uint64_t seed = 42;
  // Sampled pairs for the labeling bcp probe.
  std::size_t samples = 200;
  FixlabOptions fix;
  // Lines [1, y] for the projection suite and triangle vertices for the 4K
  // scan are drawn from this window.
  DomainWindow line_window{2, 1};
  std::vector<Coord> k_values{0, 1, 2};
  // E for hren; cascades uses its own E so that fine geodesics exist
  // when every fixed-pair component is connected to its companion.
  Coord fine_e = 0;
  Coord cascades_e = 2;
  Coord stability_e0 = 2;
  Coord stability_mu = 1;
  // Negative: max rel_length over the fixed sample.
  Coord bgen_p = -1;
};

/// Suite names accepted by run_suite, "all" last.
std::vector<std::string> const& suite_names();

/// Reports in a fixed order. "all" runs every suite. ValidationError for an
/// unknown name.
std::vector<ProbeReport> run_suite(std::string_view name, Automorphism const& phi,
                                   SuiteConfig const& config);

/// bcp at (A, A, 0) between geodesics joining fixed pairs and their images;
/// estimate "epsilon" is the eps0 the threshold T is built from.
ProbeReport image_bcp(Automorphism const& phi, SuiteConfig const& config);

}  // namespace relfix
