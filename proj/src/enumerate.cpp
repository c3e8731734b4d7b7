#include "relfix/enumerate.hpp"

#include <algorithm>

namespace relfix {

std::vector<Syllable> factor_syllables(GroupSpec const& spec, FactorId factor, Coord bound) {
  auto const& f = spec.factor(factor);
  std::size_t n = f.dimension();
  std::vector<std::vector<Coord>> values(n);
  for (std::size_t j = 0; j < n; ++j) {
    Coord d = f.modulus(j);
    for (Coord v = -bound; v <= bound; ++v) {
      if (d == 0) {
        values[j].push_back(v);
      } else if (v > -((d + 1) / 2) && v <= d / 2) {
        values[j].push_back(v);
      }
    }
  }
  std::vector<Syllable> out;
  std::vector<std::size_t> pick(n, 0);
  while (true) {
    Coords c(n, 0);
    for (std::size_t j = 0; j < n; ++j) c[j] = values[j][pick[j]];
    spec.reduce(factor, c);
    if (!spec.is_zero(c)) out.push_back({factor, std::move(c)});
    std::size_t j = n;
    while (j > 0 && pick[j - 1] + 1 == values[j - 1].size()) {
      pick[j - 1] = 0;
      --j;
    }
    if (j == 0) break;
    ++pick[j - 1];
  }
  return out;
}

namespace {

void extend(std::vector<std::vector<Syllable>> const& per_factor, std::size_t remaining,
            FactorId last, bool has_last, NormalForm::Syllables& current,
            std::vector<NormalForm>& out) {
  if (remaining == 0) {
    out.emplace_back(current);
    return;
  }
  for (FactorId f = 0; f < per_factor.size(); ++f) {
    if (has_last && f == last) continue;
    for (auto const& s : per_factor[f]) {
      current.push_back(s);
      extend(per_factor, remaining - 1, f, true, current, out);
      current.pop_back();
    }
  }
}

}  // namespace

std::vector<NormalForm> enumerate_domain(GroupSpec const& spec, DomainWindow const& window) {
  std::vector<std::vector<Syllable>> per_factor;
  for (FactorId f = 0; f < spec.factor_count(); ++f) {
    per_factor.push_back(factor_syllables(spec, f, window.max_factor_length));
  }
  std::vector<NormalForm> out;
  out.reserve(window_size(spec, window));
  NormalForm::Syllables current;
  for (std::size_t k = 0; k <= window.max_syllables; ++k) {
    extend(per_factor, k, 0, false, current, out);
  }
  return out;
}

std::uint64_t window_size(GroupSpec const& spec, DomainWindow const& window) {
  std::vector<std::uint64_t> sizes;
  for (FactorId f = 0; f < spec.factor_count(); ++f) {
    auto const& factor = spec.factor(f);
    std::uint64_t product = 1;
    for (std::size_t j = 0; j < factor.dimension(); ++j) {
      auto side = static_cast<std::uint64_t>(2 * window.max_factor_length + 1);
      Coord d = factor.modulus(j);
      product *= d == 0 ? side : std::min<std::uint64_t>(side, static_cast<std::uint64_t>(d));
    }
    sizes.push_back(product - 1);
  }
  // ending[i]: elements with k syllables whose last syllable is in factor i.
  std::vector<std::uint64_t> ending = sizes;
  std::uint64_t total = 1;
  for (std::size_t k = 1; k <= window.max_syllables; ++k) {
    std::uint64_t sum = 0;
    for (auto v : ending) sum += v;
    total += sum;
    std::vector<std::uint64_t> next(sizes.size());
    for (std::size_t i = 0; i < sizes.size(); ++i) next[i] = sizes[i] * (sum - ending[i]);
    ending = std::move(next);
  }
  return total;
}

std::uint64_t SplitMix::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix::below(std::uint64_t n) {
  std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  while (true) {
    std::uint64_t v = next();
    if (v < limit) return v % n;
  }
}

std::int64_t SplitMix::between(std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

NormalForm random_element(GroupSpec const& spec, DomainWindow const& window, SplitMix& rng) {
  std::vector<std::vector<Syllable>> per_factor;
  for (FactorId f = 0; f < spec.factor_count(); ++f) {
    per_factor.push_back(factor_syllables(spec, f, window.max_factor_length));
  }
  std::vector<FactorId> usable;
  for (FactorId f = 0; f < per_factor.size(); ++f) {
    if (!per_factor[f].empty()) usable.push_back(f);
  }
  std::size_t count = rng.below(window.max_syllables + 1);
  if (usable.size() < 2) count = std::min<std::size_t>(count, usable.size());
  NormalForm::Syllables syllables;
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<FactorId> choices;
    for (FactorId f : usable) {
      if (k == 0 || f != syllables.back().factor) choices.push_back(f);
    }
    FactorId f = choices[rng.below(choices.size())];
    auto const& pool = per_factor[f];
    syllables.push_back(pool[rng.below(pool.size())]);
  }
  return NormalForm(std::move(syllables));
}

NormalForm random_element(GroupSpec const& spec, DomainWindow const& window,
                          std::uint64_t seed) {
  SplitMix rng(seed);
  return random_element(spec, window, rng);
}

}  // namespace relfix
