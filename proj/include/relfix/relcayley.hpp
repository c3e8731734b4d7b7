#pragma once

// Paths in the relative Cayley graph Gamma(G, X u H).

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include <boost/rational.hpp>

#include "relfix/alphabet.hpp"
#include "relfix/enumerate.hpp"
#include "relfix/metrics.hpp"
#include "relfix/report.hpp"

namespace relfix {

using Rational = boost::rational<std::int64_t>;

struct Path {
  NormalForm base;
  LabelWord labels;

  std::size_t length() const { return labels.size(); }
  friend bool operator==(Path const&, Path const&) = default;
};

/// Maximal run of H-letters of one factor: edges [start, end) of its path.
struct Component {
  std::size_t start = 0;
  std::size_t end = 0;
  FactorId factor = 0;
  NormalForm entry;  // vertex `start`
  NormalForm exit;   // vertex `end`

  std::size_t edge_count() const { return end - start; }
};

struct Triangle {
  NormalForm x, y, z;
  // [x,y], [y,z], [z,x]
  std::array<Path, 3> sides;
};

// --- path plumbing --------------------------------------------------------

std::vector<NormalForm> vertices(Metrics const& m, Path const& p);
NormalForm terminus(Metrics const& m, Path const& p);
Path subpath(Metrics const& m, Path const& p, std::size_t from, std::size_t to);
Path reversed(Metrics const& m, Path const& p);
/// a followed by b; b must start where a ends.
Path concat(Metrics const& m, Path const& a, Path const& b);
Path translate(Metrics const& m, NormalForm const& g, Path const& p);

/// g^-1 h lies in H_factor (identity included).
bool in_peripheral(GroupSpec const& spec, NormalForm const& g, FactorId factor);

// --- operations ------------------------------------------------------------

Path canonical_geodesic(Metrics const& m, NormalForm const& g, NormalForm const& h);
/// Every geodesic label sequence from g to h, sorted; CapExceeded past `cap`.
std::vector<Path> geodesic_labelings(Metrics const& m, NormalForm const& g, NormalForm const& h,
                                     std::size_t cap);
Triangle geodesic_triangle(Metrics const& m, NormalForm const& x, NormalForm const& y,
                           NormalForm const& z);

std::vector<Component> components(Metrics const& m, Path const& p);
bool are_connected(GroupSpec const& spec, Component const& a, Component const& b);
bool is_without_backtracking(Metrics const& m, Path const& p);
bool is_geodesic(Metrics const& m, Path const& p);
/// l(q) <= kappa * d(q-, q+) + c for every subpath q.
bool is_quasigeodesic(Metrics const& m, Path const& p, Rational kappa, Rational c);
std::vector<std::size_t> phase_vertices(Metrics const& m, Path const& p);
/// l_X of a component: X-distance between its endpoints.
Coord component_x_length(Metrics const& m, Component const& c);
Coord rel_distance_to_path(Metrics const& m, NormalForm const& z, Path const& p);
Coord x_distance_to_set(Metrics const& m, NormalForm const& z,
                        std::vector<NormalForm> const& targets);

struct Projection {
  std::vector<std::size_t> indices;
  Coord distance = 0;
  // Failures of the (3,0)-quasigeodesic / no-backtracking postcondition.
  std::vector<std::string> violations;
};

/// All vertices of L nearest to z. PreconditionError when L is not geodesic.
Projection project(Metrics const& m, NormalForm const& z, Path const& line);

/// Whether d(u, v) <= 4K, for u and v within K of every side of t.
/// PreconditionError when u or v is farther than K from some side.
bool four_k_check(Metrics const& m, Triangle const& t, Coord k, NormalForm const& u,
                  NormalForm const& v);

/// Side vertices of t and their X-neighbours: the candidate points u, v.
std::vector<NormalForm> four_k_candidates(Metrics const& m, Triangle const& t);

struct FourKScan {
  std::uint64_t qualifying_points = 0;
  std::uint64_t pairs = 0;
  std::vector<std::string> violations;
};

/// four_k_check over every pair of qualifying candidates.
FourKScan four_k_scan(Metrics const& m, Triangle const& t, Coord k);

// --- probes ------------------------------------------------------------------

struct PathPair {
  Path p;
  Path q;
};

struct RhoSample {
  Path line;
  NormalForm a;
  NormalForm b;
};

ProbeReport bcp_probe(Metrics const& m, std::vector<PathPair> const& pairs, Rational kappa,
                      Rational c, Coord k);
ProbeReport qg_close_probe(Metrics const& m, std::vector<PathPair> const& pairs,
                           Rational kappa, Rational c, Coord k);
ProbeReport projection_rho_probe(Metrics const& m, std::vector<RhoSample> const& samples);

// --- samplers ----------------------------------------------------------------

/// Two geodesic labelings of g^-1 h based at g, for random g, h.
std::vector<PathPair> sample_labeling_pairs(Metrics const& m, DomainWindow const& window,
                                            std::size_t count, std::uint64_t seed);
/// (1,2)-quasigeodesics: a geodesic followed by one more edge, paired with a
/// geodesic between the same endpoints. Samples with backtracking are dropped.
std::vector<PathPair> sample_quasigeodesic_pairs(Metrics const& m, DomainWindow const& window,
                                                 std::size_t count, std::uint64_t seed);
std::vector<RhoSample> sample_rho(Metrics const& m, DomainWindow const& window,
                                  std::size_t count, std::uint64_t seed);

std::string format_label(GroupSpec const& spec, EdgeLabel const& label);
std::string format_path(GroupSpec const& spec, Path const& p);

}  // namespace relfix
