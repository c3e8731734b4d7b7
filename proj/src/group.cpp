#include "relfix/group.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>

namespace relfix {

namespace {

Coord floor_mod(Coord value, Coord modulus) {
  Coord r = value % modulus;
  return r < 0 ? r + modulus : r;
}

// Symmetric representative of a torsion coordinate: in (-d/2, d/2].
Coord symmetric(Coord value, Coord modulus) {
  return value > modulus / 2 ? value - modulus : value;
}

void hash_mix(std::size_t& seed, std::size_t value) {
  seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

}  // namespace

bool is_nrh_factor(AbelianFactor const& factor) { return factor.rank >= 2; }

std::size_t NormalFormHash::operator()(NormalForm const& g) const noexcept {
  std::size_t seed = g.size();
  for (auto const& s : g.syllables()) {
    hash_mix(seed, s.factor);
    for (Coord c : s.coords) hash_mix(seed, static_cast<std::size_t>(c));
  }
  return seed;
}

GroupSpec::GroupSpec(std::vector<AbelianFactor> factors,
                     std::vector<NormalForm> extra_x_elements)
    : factors_(std::move(factors)), extras_(std::move(extra_x_elements)) {
  std::set<std::string> generator_names;
  std::set<std::string> factor_names;
  for (FactorId id = 0; id < factors_.size(); ++id) {
    auto const& f = factors_[id];
    if (!factor_names.insert(f.name).second) {
      throw ValidationError("duplicate factor name '" + f.name + "'");
    }
    if (f.generator_names.size() != f.dimension()) {
      throw ValidationError("factor '" + f.name + "' declares " +
                            std::to_string(f.generator_names.size()) +
                            " generators but rank + torsion = " +
                            std::to_string(f.dimension()));
    }
    if (f.dimension() == 0) {
      throw ValidationError("factor '" + f.name + "' has no generators");
    }
    for (std::size_t i = 0; i < f.torsion.size(); ++i) {
      if (f.torsion[i] < 2) {
        throw ValidationError("factor '" + f.name + "': torsion entries must be >= 2");
      }
      if (i > 0 && f.torsion[i] % f.torsion[i - 1] != 0) {
        throw ValidationError("factor '" + f.name +
                              "': torsion not in divisor-chain order");
      }
    }
    if (f.free_generator && (f.rank != 1 || !f.torsion.empty())) {
      throw ValidationError("free generator '" + f.name + "' must be infinite cyclic");
    }
    for (std::size_t j = 0; j < f.generator_names.size(); ++j) {
      if (!generator_names.insert(f.generator_names[j]).second) {
        throw ValidationError("duplicate generator name '" + f.generator_names[j] + "'");
      }
      generators_.push_back({id, j});
    }
    peripheral_.push_back(is_nrh_factor(f));
  }
  for (auto const& f : factors_) {
    if (!f.free_generator && generator_names.count(f.name) != 0) {
      throw ValidationError("factor name '" + f.name + "' clashes with a generator");
    }
  }
  for (auto const& e : extras_) {
    if (!is_normal(e) || e.is_identity()) {
      throw ValidationError("extra X element is not a nontrivial normal form");
    }
  }
}

std::vector<FactorId> GroupSpec::peripheral_factors() const {
  std::vector<FactorId> out;
  for (FactorId id = 0; id < factors_.size(); ++id) {
    if (peripheral_[id]) out.push_back(id);
  }
  return out;
}

std::vector<std::string> GroupSpec::free_generators() const {
  std::vector<std::string> out;
  for (auto const& f : factors_) {
    if (f.free_generator) out.push_back(f.generator_names.front());
  }
  return out;
}

std::string const& GroupSpec::generator_name(std::size_t index) const {
  auto ref = generators_.at(index);
  return factors_[ref.factor].generator_names[ref.coord];
}

std::optional<std::size_t> GroupSpec::find_generator(std::string_view name) const {
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    if (generator_name(i) == name) return i;
  }
  return std::nullopt;
}

std::optional<FactorId> GroupSpec::find_factor(std::string_view name) const {
  for (FactorId id = 0; id < factors_.size(); ++id) {
    if (factors_[id].name == name) return id;
  }
  return std::nullopt;
}

GroupSpec GroupSpec::with_extra_x_elements(std::vector<NormalForm> extras) const {
  return GroupSpec(factors_, std::move(extras));
}

void GroupSpec::reduce(FactorId factor, Coords& coords) const {
  auto const& f = factors_[factor];
  for (std::size_t j = f.rank; j < coords.size(); ++j) {
    coords[j] = floor_mod(coords[j], f.modulus(j));
  }
}

bool GroupSpec::is_zero(Coords const& coords) const {
  return std::all_of(coords.begin(), coords.end(), [](Coord c) { return c == 0; });
}

bool GroupSpec::is_normal(NormalForm const& g) const {
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto const& s = g[i];
    if (s.factor >= factors_.size()) return false;
    auto const& f = factors_[s.factor];
    if (s.coords.size() != f.dimension() || is_zero(s.coords)) return false;
    for (std::size_t j = f.rank; j < s.coords.size(); ++j) {
      if (s.coords[j] < 0 || s.coords[j] >= f.modulus(j)) return false;
    }
    if (i > 0 && g[i - 1].factor == s.factor) return false;
  }
  return true;
}

NormalForm GroupSpec::multiply(NormalForm const& g, NormalForm const& h) const {
  NormalForm::Syllables out(g.syllables().begin(), g.syllables().end());
  std::size_t i = 0;
  while (i < h.size() && !out.empty() && out.back().factor == h[i].factor) {
    Syllable merged = out.back();
    out.pop_back();
    for (std::size_t j = 0; j < merged.coords.size(); ++j) {
      merged.coords[j] += h[i].coords[j];
    }
    reduce(merged.factor, merged.coords);
    ++i;
    if (!is_zero(merged.coords)) {
      out.push_back(std::move(merged));
      break;
    }
  }
  out.insert(out.end(), h.syllables().begin() + static_cast<std::ptrdiff_t>(i),
             h.syllables().end());
  return NormalForm(std::move(out));
}

Coords GroupSpec::negate(FactorId factor, Coords const& coords) const {
  Coords out = coords;
  for (Coord& c : out) c = -c;
  reduce(factor, out);
  return out;
}

NormalForm GroupSpec::invert(NormalForm const& g) const {
  NormalForm::Syllables out;
  out.reserve(g.size());
  for (std::size_t i = g.size(); i-- > 0;) {
    out.push_back({g[i].factor, negate(g[i].factor, g[i].coords)});
  }
  return NormalForm(std::move(out));
}

NormalForm GroupSpec::power(NormalForm const& g, Coord exponent) const {
  NormalForm base = exponent < 0 ? invert(g) : g;
  auto n = static_cast<std::uint64_t>(exponent < 0 ? -exponent : exponent);
  NormalForm result;
  while (n != 0) {
    if (n & 1U) result = multiply(result, base);
    n >>= 1U;
    if (n != 0) base = multiply(base, base);
  }
  return result;
}

NormalForm GroupSpec::element(FactorId factor, Coords coords) const {
  if (coords.size() != factors_.at(factor).dimension()) {
    throw ValidationError("coordinate vector has wrong length for factor '" +
                          factors_[factor].name + "'");
  }
  reduce(factor, coords);
  if (is_zero(coords)) return {};
  NormalForm::Syllables s;
  s.push_back({factor, std::move(coords)});
  return NormalForm(std::move(s));
}

NormalForm GroupSpec::generator_power(std::size_t index, Coord exponent) const {
  auto ref = generators_.at(index);
  Coords coords(factors_[ref.factor].dimension(), 0);
  coords[ref.coord] = exponent;
  return element(ref.factor, std::move(coords));
}

NormalForm GroupSpec::normal_form(Word const& word) const {
  NormalForm result;
  for (auto const& letter : word) {
    Coords coords = letter.coords;
    if (letter.peripheral_letter) {
      if (!peripheral_.at(letter.factor)) {
        throw ValidationError("factor '" + factors_[letter.factor].name +
                              "' is not peripheral");
      }
      reduce(letter.factor, coords);
      if (is_zero(coords)) {
        throw ValidationError("peripheral letter with zero vector");
      }
    }
    result = multiply(result, element(letter.factor, std::move(coords)));
  }
  return result;
}

Coord GroupSpec::syllable_norm(Syllable const& s) const {
  auto const& f = factors_[s.factor];
  Coord norm = 0;
  for (std::size_t j = 0; j < s.coords.size(); ++j) {
    Coord c = j < f.rank ? std::abs(s.coords[j])
                         : std::abs(symmetric(s.coords[j], f.modulus(j)));
    norm = std::max(norm, c);
  }
  return norm;
}

Coord GroupSpec::syllable_x_length(Syllable const& s) const {
  auto const& f = factors_[s.factor];
  Coord total = 0;
  for (std::size_t j = 0; j < s.coords.size(); ++j) {
    total += j < f.rank ? std::abs(s.coords[j])
                        : std::abs(symmetric(s.coords[j], f.modulus(j)));
  }
  return total;
}

bool GroupSpec::in_window(NormalForm const& g, DomainWindow const& w) const {
  if (g.size() > w.max_syllables) return false;
  return std::all_of(g.syllables().begin(), g.syllables().end(), [&](Syllable const& s) {
    return syllable_norm(s) <= w.max_factor_length;
  });
}

std::string GroupSpec::format_syllable(Syllable const& s) const {
  auto const& f = factors_[s.factor];
  std::string out;
  for (std::size_t j = 0; j < s.coords.size(); ++j) {
    Coord c = j < f.rank ? s.coords[j] : symmetric(s.coords[j], f.modulus(j));
    if (c == 0) continue;
    if (!out.empty()) out += ' ';
    out += f.generator_names[j];
    if (c != 1) out += "^" + std::to_string(c);
  }
  return out;
}

std::string GroupSpec::format(NormalForm const& g) const {
  if (g.is_identity()) return "1";
  std::string out;
  for (auto const& s : g.syllables()) {
    if (!out.empty()) out += ' ';
    out += format_syllable(s);
  }
  return out;
}

std::string GroupSpec::canonical_text() const {
  std::ostringstream os;
  for (auto const& f : factors_) {
    if (f.free_generator) {
      os << "free " << f.name << '\n';
      continue;
    }
    os << "factor " << f.name << " { abelian; gens ";
    for (std::size_t j = 0; j < f.generator_names.size(); ++j) {
      os << (j ? "," : "") << f.generator_names[j];
    }
    if (!f.torsion.empty()) {
      os << "; torsion ";
      for (std::size_t j = 0; j < f.torsion.size(); ++j) {
        os << (j ? "," : "") << f.torsion[j];
      }
    }
    os << " }\n";
  }
  for (auto const& e : extras_) os << "# extra " << format(e) << '\n';
  return os.str();
}

}  // namespace relfix
