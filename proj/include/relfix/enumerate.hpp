#pragma once

#include <cstdint>
#include <vector>

#include "relfix/group.hpp"

namespace relfix {

/// Nonzero syllables of `factor` whose max-norm is at most `bound`, in
/// coordinate order.
std::vector<Syllable> factor_syllables(GroupSpec const& spec, FactorId factor, Coord bound);

/// Every element of the window exactly once: by syllable count, then by
/// factor sequence, then by coordinates.
std::vector<NormalForm> enumerate_domain(GroupSpec const& spec, DomainWindow const& window);

/// Number of window elements, counted by a transfer recursion over the last
/// factor used.
std::uint64_t window_size(GroupSpec const& spec, DomainWindow const& window);

/// Seeded draw: syllable count uniform, then a uniform admissible factor
/// sequence, then uniform syllables. Uniform over patterns, not elements.
NormalForm random_element(GroupSpec const& spec, DomainWindow const& window,
                          std::uint64_t seed);

/// Small deterministic generator shared by samplers. Draws do not depend on
/// the standard library's distribution implementations.
class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);
  /// Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);

 private:
  std::uint64_t state_;
};

NormalForm random_element(GroupSpec const& spec, DomainWindow const& window, SplitMix& rng);

}  // namespace relfix
