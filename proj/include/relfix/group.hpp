#pragma once

// Exact arithmetic in free products G = A_1 * ... * A_m * F_k of finitely
// generated abelian factors and a free part.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "relfix/error.hpp"

namespace relfix {

using Coord = std::int64_t;
using Coords = boost::container::small_vector<Coord, 3>;
using FactorId = std::uint32_t;

/// A finitely generated abelian group Z^rank x Z/d_1 x ... x Z/d_s.
/// The first `rank` generators are free, the remaining ones carry torsion
/// d_1 | d_2 | ... in declaration order.
struct AbelianFactor {
  std::string name;
  std::size_t rank = 0;
  std::vector<Coord> torsion;
  std::vector<std::string> generator_names;
  // Declared through `free NAME` rather than `factor NAME {...}`.
  bool free_generator = false;

  std::size_t dimension() const { return rank + torsion.size(); }
  // 0 for free coordinates.
  Coord modulus(std::size_t coord) const {
    return coord < rank ? 0 : torsion[coord - rank];
  }

  friend bool operator==(AbelianFactor const&, AbelianFactor const&) = default;
};

/// True iff the factor is not virtually cyclic, i.e. its free rank is at
/// least 2. Only such factors are peripheral.
bool is_nrh_factor(AbelianFactor const& factor);

/// A nontrivial element of one factor. Torsion coordinates live in [0, d).
struct Syllable {
  FactorId factor = 0;
  Coords coords;

  friend bool operator==(Syllable const& a, Syllable const& b) {
    return a.factor == b.factor && a.coords == b.coords;
  }
  friend bool operator<(Syllable const& a, Syllable const& b) {
    if (a.factor != b.factor) return a.factor < b.factor;
    return a.coords < b.coords;
  }
};

/// Alternating-syllable normal form: adjacent syllables lie in distinct
/// factors and no syllable is trivial. The empty list is the identity.
class NormalForm {
 public:
  using Syllables = boost::container::small_vector<Syllable, 4>;

  NormalForm() = default;

  /// Caller guarantees the normal-form invariants (see GroupSpec::is_normal).
  explicit NormalForm(Syllables syllables) : syllables_(std::move(syllables)) {}

  std::span<Syllable const> syllables() const {
    return {syllables_.data(), syllables_.size()};
  }
  std::size_t size() const { return syllables_.size(); }
  bool is_identity() const { return syllables_.empty(); }
  Syllable const& operator[](std::size_t i) const { return syllables_[i]; }
  Syllable const& front() const { return syllables_.front(); }
  Syllable const& back() const { return syllables_.back(); }

  friend bool operator==(NormalForm const& a, NormalForm const& b) {
    return a.syllables_ == b.syllables_;
  }
  // Shortlex on syllables; used for deterministic ordering only.
  friend bool operator<(NormalForm const& a, NormalForm const& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.syllables_ < b.syllables_;
  }

 private:
  Syllables syllables_;
};

struct NormalFormHash {
  std::size_t operator()(NormalForm const& g) const noexcept;
};

/// A generator of X: coordinate `coord` of factor `factor`.
struct GeneratorRef {
  FactorId factor = 0;
  std::size_t coord = 0;
};

/// One letter of a word over X u H before normalization. Generator powers
/// and peripheral letters both become a (possibly zero) factor vector.
struct WordLetter {
  FactorId factor = 0;
  Coords coords;
  // Peripheral letters must be nonzero; generator powers may cancel.
  bool peripheral_letter = false;
};

using Word = std::vector<WordLetter>;

/// Finite enumeration region: at most `max_syllables` syllables, each of
/// max-norm at most `max_factor_length` (torsion coordinates measured by
/// their symmetric representative).
struct DomainWindow {
  std::size_t max_syllables = 0;
  Coord max_factor_length = 0;

  friend bool operator==(DomainWindow const&, DomainWindow const&) = default;
};

class GroupSpec {
 public:
  GroupSpec() = default;
  /// Validates names, torsion chains and extra elements.
  explicit GroupSpec(std::vector<AbelianFactor> factors,
                     std::vector<NormalForm> extra_x_elements = {});

  std::span<AbelianFactor const> factors() const { return factors_; }
  AbelianFactor const& factor(FactorId id) const { return factors_.at(id); }
  std::size_t factor_count() const { return factors_.size(); }

  bool is_peripheral(FactorId id) const { return peripheral_.at(id); }
  std::vector<bool> const& peripheral_flags() const { return peripheral_; }
  std::vector<FactorId> peripheral_factors() const;
  std::vector<std::string> free_generators() const;

  std::size_t generator_count() const { return generators_.size(); }
  GeneratorRef generator(std::size_t index) const { return generators_.at(index); }
  std::string const& generator_name(std::size_t index) const;
  std::optional<std::size_t> find_generator(std::string_view name) const;
  std::optional<FactorId> find_factor(std::string_view name) const;

  /// Conjugators f adjoined to X; each also contributes f^-1 as a letter.
  std::span<NormalForm const> extra_x_elements() const { return extras_; }
  GroupSpec with_extra_x_elements(std::vector<NormalForm> extras) const;

  // --- arithmetic ---------------------------------------------------------

  /// Reduces torsion coordinates into [0, d).
  void reduce(FactorId factor, Coords& coords) const;
  bool is_zero(Coords const& coords) const;
  bool is_normal(NormalForm const& g) const;

  NormalForm identity() const { return {}; }
  NormalForm multiply(NormalForm const& g, NormalForm const& h) const;
  NormalForm invert(NormalForm const& g) const;
  NormalForm power(NormalForm const& g, Coord exponent) const;
  /// Single-syllable element; identity when `coords` reduce to zero.
  NormalForm element(FactorId factor, Coords coords) const;
  /// Generator `index` raised to `exponent`.
  NormalForm generator_power(std::size_t index, Coord exponent) const;
  NormalForm normal_form(Word const& word) const;
  Coords negate(FactorId factor, Coords const& coords) const;

  /// Max-norm used by DomainWindow membership.
  Coord syllable_norm(Syllable const& s) const;
  /// Minimal spelling length of a syllable over the factor's generators.
  Coord syllable_x_length(Syllable const& s) const;
  bool in_window(NormalForm const& g, DomainWindow const& w) const;

  /// Human-readable word, e.g. "a^2 b^-3 t". Identity renders as "1".
  std::string format(NormalForm const& g) const;
  std::string format_syllable(Syllable const& s) const;
  /// Canonical source text, stable across runs (used for digests).
  std::string canonical_text() const;

  friend bool operator==(GroupSpec const& a, GroupSpec const& b) {
    return a.factors_ == b.factors_ && a.extras_ == b.extras_;
  }

 private:
  std::vector<AbelianFactor> factors_;
  std::vector<bool> peripheral_;
  std::vector<GeneratorRef> generators_;
  std::vector<NormalForm> extras_;
};

}  // namespace relfix
