#pragma once

// Fixed subgroups on finite windows: enumeration, fineness of geodesics and
// the empirical checks behind relative quasiconvexity of Fix(phi).
//
// Every "hat" quantity here is measured against the windowed sample of
// Fix(phi), so distances to Fix are upper bounds that become exact once the
// window holds all relevant fixed elements.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "relfix/automorphism.hpp"
#include "relfix/relcayley.hpp"
#include "relfix/report.hpp"

namespace relfix {

struct FixedSample {
  DomainWindow window;
  // Window enumeration order.
  std::vector<NormalForm> elements;

  bool contains(NormalForm const& g) const;
};

bool is_fixed(Automorphism const& phi, NormalForm const& g);
FixedSample enumerate_fixed(Automorphism const& phi, DomainWindow const& window);
/// {h in window : hg = gh}, by direct multiplication.
std::vector<NormalForm> centralizer_oracle(GroupSpec const& spec, NormalForm const& g,
                                           DomainWindow const& window);

/// Limits shared by the sampled parts of the checks. Pair and triangle sets
/// are exhaustive whenever they fit under the caps.
struct FixlabOptions {
  std::size_t label_cap = 64;
  std::size_t max_pairs = 4096;
  std::size_t max_triangles = 4096;
  std::uint64_t seed = 0;
};

/// Ordered pairs (x, y), x != y, of the sample; seeded subsample past max_pairs.
std::vector<std::pair<NormalForm, NormalForm>> fixed_pairs(FixedSample const& fixed,
                                                           FixlabOptions const& options);
/// Every geodesic labeling between the pairs above. Pairs whose labelings
/// exceed the cap contribute their canonical geodesic only; `*truncated`
/// counts them.
std::vector<Path> fixed_pair_geodesics(Automorphism const& phi, FixedSample const& fixed,
                                       FixlabOptions const& options,
                                       std::uint64_t* truncated = nullptr);
/// Canonical triangles on triples of fixed elements.
std::vector<Triangle> fixed_triangles(Automorphism const& phi, FixedSample const& fixed,
                                      FixlabOptions const& options);

// --- quasiconvexity --------------------------------------------------------

/// sigma-hat over the given endpoint pairs: max over their geodesic
/// labelings and vertices v of d_X(v, fixed). Pairs past the label cap are
/// skipped and counted in details.skipped_pairs.
ProbeReport sigma_probe(Automorphism const& phi,
                        std::vector<std::pair<NormalForm, NormalForm>> const& pairs,
                        FixedSample const& fixed, std::size_t label_cap);

/// sigma-hat for the window plus a ladder of smaller windows (details.ladder).
ProbeReport quasiconvexity_profile(Automorphism const& phi, DomainWindow const& window,
                                   std::size_t label_cap);

// --- fineness --------------------------------------------------------------

/// The component through `edge`'s companion inside image_path(phi, p).
Component companion_component(Automorphism const& phi, Path const& p, ImagePath const& image,
                              Component const& c);
bool connected_to_companion(Automorphism const& phi, Path const& p, ImagePath const& image,
                            Component const& c);

/// No component e with l_X(e) > E is connected to its companion.
/// PreconditionError when p is not geodesic.
bool is_e_fine(Automorphism const& phi, Path const& p, Coord e);

struct FineSegments {
  std::vector<Path> segments;
  Coord c_hat = 0;
};

/// Initial segments of length <= R of E-fine geodesics from x to windowed
/// fixed elements.
FineSegments fine_segments(Automorphism const& phi, NormalForm const& x, Coord e, Coord r,
                           DomainWindow const& window, std::size_t label_cap = 64);

/// (E + eps + 2)(S + 2 eps + 2)^(n+1), saturating at INT64_MAX.
std::int64_t alpha_bound(Coord e, Coord eps, Coord s, Coord n);

/// Each component e of each sample, written p1 e p2, against alpha(l(p1)).
ProbeReport cascades_check(Automorphism const& phi, std::vector<Path> const& samples, Coord e,
                           Coord eps);

// --- triangles -------------------------------------------------------------

struct LargeCentralComponent {
  std::array<Component, 3> sides;
  Coord threshold = 0;
};

/// max{S (3 eps0 + 2), E}.
Coord central_threshold(Coord s, Coord eps0, Coord e);

/// Pairwise connected components, one per side, each with l_X > T.
std::optional<LargeCentralComponent> find_large_central_component(Automorphism const& phi,
                                                                  Triangle const& t, Coord threshold);

/// Every side of a large central component is connected to its companion.
ProbeReport hren_check(Automorphism const& phi, std::vector<Triangle> const& triangles, Coord e,
                       Coord threshold);

/// eta-hat over triangles without a large central component.
ProbeReport proj_eta_probe(Automorphism const& phi, std::vector<Triangle> const& triangles,
                           Coord e, Coord threshold);

// --- proximity to Fix ------------------------------------------------------

/// mu-hat(theta): max of d_X(y, Fix) over window elements with d_X(y, phi(y)) <= theta.
ProbeReport fixed_proximity_probe(Automorphism const& phi, DomainWindow const& window,
                                  Coord theta);

/// Endpoints of components connected to their companions, on geodesics
/// between fixed pairs, against the fixed sample.
ProbeReport companion_proximity_check(Automorphism const& phi, DomainWindow const& window,
                                      FixlabOptions const& options = {});

/// xi-hat and zeta-hat on E-fine geodesics between fixed pairs.
ProbeReport fine_midpoint_probe(Automorphism const& phi, DomainWindow const& window, Coord e,
                                Coord r, FixlabOptions const& options = {});

/// Geodesics q with endpoints d_X-close (<= mu) to those of an E0-fine
/// geodesic p between fixed elements must be (E0 + 2 eps)-fine, eps being
/// the bcp estimate at (1, 0, mu) on the same pairs.
ProbeReport e_fine_stability_check(Automorphism const& phi, DomainWindow const& window,
                                   Coord e0, Coord mu, FixlabOptions const& options = {});

// --- generation and peripheral structure ----------------------------------

/// Smallest P-hat <= P whose short fixed elements generate the windowed
/// sample; P < 0 means max rel_length over the sample.
ProbeReport bounded_generation_check(Automorphism const& phi, DomainWindow const& window,
                                     Coord p = -1);

struct InducedClass {
  FactorId factor = 0;
  // Represents g^-1 H_factor g.
  NormalForm conjugator;
  std::vector<NormalForm> intersection;
  std::size_t windowed_peripheral = 0;
  bool invariant = true;
  // Intersection size for R_x = 1 .. window.max_factor_length.
  std::vector<std::size_t> growth;

  bool full() const { return intersection.size() == windowed_peripheral; }
};

struct InducedPeripherals {
  std::vector<InducedClass> classes;
  ProbeReport report;
};

/// Conjugates of peripheral subgroups meeting the fixed sample in at least
/// `threshold` nontrivial elements, up to conjugation by the sample.
/// threshold 0 means 2 R_syl.
InducedPeripherals induced_peripherals(Automorphism const& phi, DomainWindow const& window,
                                       std::size_t threshold = 0);

/// H_lambda cap g^-1 H_mu g is trivial inside the window unless lambda = mu
/// and g lies in H_lambda.
ProbeReport peripheral_intersection_check(GroupSpec const& spec, DomainWindow const& window);

}  // namespace relfix
