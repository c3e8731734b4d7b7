#pragma once

#include <cstdint>
#include <tuple>

#include "relfix/group.hpp"

namespace relfix {

/// A letter of X u H. X-letters are a declared generator or an adjoined
/// extra element, each with a sign. H-letters carry a nonzero vector of a
/// peripheral factor. The two alphabets stay disjoint even when an X-letter
/// and an H-letter denote the same element.
struct EdgeLabel {
  enum class Kind : std::uint8_t { kGenerator = 0, kExtra = 1, kPeripheral = 2 };

  Kind kind = Kind::kGenerator;
  // Generator index, extra index, or peripheral factor id.
  std::uint32_t index = 0;
  // +1 / -1 for X-letters; always +1 for H-letters.
  int sign = 1;
  Coords coords;

  static EdgeLabel generator(std::size_t index, int sign) {
    return {Kind::kGenerator, static_cast<std::uint32_t>(index), sign, {}};
  }
  static EdgeLabel extra(std::size_t index, int sign) {
    return {Kind::kExtra, static_cast<std::uint32_t>(index), sign, {}};
  }
  static EdgeLabel peripheral(FactorId factor, Coords coords) {
    return {Kind::kPeripheral, factor, 1, std::move(coords)};
  }

  bool is_x() const { return kind != Kind::kPeripheral; }
  bool is_h() const { return kind == Kind::kPeripheral; }

  friend bool operator==(EdgeLabel const& a, EdgeLabel const& b) {
    return a.kind == b.kind && a.index == b.index && a.sign == b.sign &&
           a.coords == b.coords;
  }
  // Letter order: generators (+ before -), then extras, then H-letters.
  friend bool operator<(EdgeLabel const& a, EdgeLabel const& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.index != b.index) return a.index < b.index;
    if (a.sign != b.sign) return a.sign > b.sign;
    return a.coords < b.coords;
  }
};

using LabelWord = std::vector<EdgeLabel>;

}  // namespace relfix
