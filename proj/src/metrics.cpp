#include "relfix/metrics.hpp"

#include <algorithm>
#include <cstdlib>

namespace relfix {

namespace {

// Symmetric representative of a torsion coordinate.
Coord symmetric(Coord value, Coord modulus) {
  return value > modulus / 2 ? value - modulus : value;
}

// Every nonzero vector of `factor` with max-norm <= bound.
std::vector<Coords> box_vectors(GroupSpec const& spec, FactorId factor, Coord bound) {
  auto const& f = spec.factor(factor);
  std::vector<std::pair<Coord, Coord>> ranges;
  for (std::size_t j = 0; j < f.dimension(); ++j) {
    if (j < f.rank) {
      ranges.emplace_back(-bound, bound);
    } else {
      Coord d = f.modulus(j);
      Coord lo = -std::min(bound, (d - 1) / 2);
      Coord hi = std::min(bound, d / 2);
      ranges.emplace_back(lo, hi);
    }
  }
  std::vector<Coords> out;
  Coords current(f.dimension(), 0);
  for (std::size_t j = 0; j < ranges.size(); ++j) current[j] = ranges[j].first;
  while (true) {
    Coords v = current;
    spec.reduce(factor, v);
    if (!spec.is_zero(v)) out.push_back(std::move(v));
    std::size_t j = 0;
    while (j < ranges.size() && current[j] == ranges[j].second) {
      current[j] = ranges[j].first;
      ++j;
    }
    if (j == ranges.size()) break;
    ++current[j];
  }
  return out;
}

}  // namespace

struct Metrics::Ball {
  std::vector<std::vector<NormalForm>> layers;
  std::unordered_map<NormalForm, Coord, NormalFormHash> distance;
};

struct Metrics::RelSearch {
  Coord distance = 0;
  std::vector<LabelWord> words;
};

Metrics::~Metrics() = default;

Metrics::Metrics(GroupSpec spec, MetricOptions options)
    : spec_(std::move(spec)), options_(options) {
  for (std::size_t i = 0; i < spec_.generator_count(); ++i) {
    auto ref = spec_.generator(i);
    x_alphabet_.push_back(EdgeLabel::generator(i, +1));
    if (spec_.factor(ref.factor).modulus(ref.coord) != 2) {
      x_alphabet_.push_back(EdgeLabel::generator(i, -1));
    }
  }
  auto extras = spec_.extra_x_elements();
  for (std::size_t k = 0; k < extras.size(); ++k) {
    x_alphabet_.push_back(EdgeLabel::extra(k, +1));
    if (!(spec_.invert(extras[k]) == extras[k])) {
      x_alphabet_.push_back(EdgeLabel::extra(k, -1));
    }
  }
  for (auto const& letter : x_alphabet_) x_letter_elements_.push_back(letter_element(letter));
}

NormalForm Metrics::letter_element(EdgeLabel const& label) const {
  switch (label.kind) {
    case EdgeLabel::Kind::kGenerator:
      return spec_.generator_power(label.index, label.sign);
    case EdgeLabel::Kind::kExtra: {
      auto const& e = spec_.extra_x_elements()[label.index];
      return label.sign > 0 ? e : spec_.invert(e);
    }
    case EdgeLabel::Kind::kPeripheral:
      return spec_.element(label.index, label.coords);
  }
  return {};
}

NormalForm Metrics::word_element(LabelWord const& word) const {
  NormalForm g;
  for (auto const& l : word) g = spec_.multiply(g, letter_element(l));
  return g;
}

namespace {

EdgeLabel inverse_label(GroupSpec const& spec, EdgeLabel const& l) {
  EdgeLabel out = l;
  switch (l.kind) {
    case EdgeLabel::Kind::kGenerator: {
      auto ref = spec.generator(l.index);
      if (spec.factor(ref.factor).modulus(ref.coord) != 2) out.sign = -l.sign;
      break;
    }
    case EdgeLabel::Kind::kExtra: {
      auto const& e = spec.extra_x_elements()[l.index];
      if (!(spec.invert(e) == e)) out.sign = -l.sign;
      break;
    }
    case EdgeLabel::Kind::kPeripheral:
      out.coords = spec.negate(l.index, l.coords);
      break;
  }
  return out;
}

}  // namespace

LabelWord Metrics::invert_word(LabelWord const& word) const {
  LabelWord out;
  out.reserve(word.size());
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    out.push_back(inverse_label(spec_, *it));
  }
  return out;
}

Coord Metrics::closed_form_x_length(NormalForm const& g) const {
  Coord total = 0;
  for (auto const& s : g.syllables()) total += spec_.syllable_x_length(s);
  return total;
}

Coord Metrics::closed_form_rel_length(NormalForm const& g) const {
  Coord total = 0;
  for (auto const& s : g.syllables()) {
    total += spec_.is_peripheral(s.factor) ? 1 : spec_.syllable_x_length(s);
  }
  return total;
}

std::vector<LabelWord> Metrics::syllable_spellings(Syllable const& s) const {
  auto const& f = spec_.factor(s.factor);
  std::size_t first_gen = 0;
  for (std::size_t i = 0; i < spec_.generator_count(); ++i) {
    if (spec_.generator(i).factor == s.factor) {
      first_gen = i;
      break;
    }
  }
  // Per coordinate: the minimal-length runs of one letter.
  std::vector<std::vector<LabelWord>> per_coord;
  for (std::size_t j = 0; j < s.coords.size(); ++j) {
    Coord c = s.coords[j];
    if (c == 0) continue;
    std::vector<LabelWord> opts;
    auto push = [&](int sign, Coord count) {
      opts.emplace_back(static_cast<std::size_t>(count),
                        EdgeLabel::generator(first_gen + j, sign));
    };
    if (j < f.rank) {
      push(c > 0 ? 1 : -1, std::abs(c));
    } else {
      Coord d = f.modulus(j);
      Coord up = c;
      Coord down = d - c;
      if (up <= down) push(1, up);
      if (down < up || (down == up && d != 2)) push(-1, down);
    }
    per_coord.push_back(std::move(opts));
  }
  std::vector<LabelWord> out;
  std::vector<std::size_t> pick(per_coord.size(), 0);
  while (true) {
    LabelWord letters;
    for (std::size_t k = 0; k < per_coord.size(); ++k) {
      auto const& w = per_coord[k][pick[k]];
      letters.insert(letters.end(), w.begin(), w.end());
    }
    std::sort(letters.begin(), letters.end());
    do {
      out.push_back(letters);
    } while (std::next_permutation(letters.begin(), letters.end()));
    std::size_t k = 0;
    while (k < pick.size() && pick[k] + 1 == per_coord[k].size()) {
      pick[k] = 0;
      ++k;
    }
    if (k == pick.size()) break;
    ++pick[k];
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

// Lexicographically least minimal spelling: sorted letters, '+' on ties.
LabelWord least_spelling(GroupSpec const& spec, Syllable const& s) {
  auto const& f = spec.factor(s.factor);
  std::size_t first_gen = 0;
  while (spec.generator(first_gen).factor != s.factor) ++first_gen;
  LabelWord out;
  for (std::size_t j = 0; j < s.coords.size(); ++j) {
    Coord c = j < f.rank ? s.coords[j] : symmetric(s.coords[j], f.modulus(j));
    for (Coord k = 0; k < std::abs(c); ++k) {
      out.push_back(EdgeLabel::generator(first_gen + j, c > 0 ? 1 : -1));
    }
  }
  return out;
}

}  // namespace

Metrics::Ball const& Metrics::ball() const {
  std::call_once(ball_once_, [this] {
    auto b = std::make_unique<Ball>();
    int radius = (options_.bfs_radius_cap + 1) / 2;
    b->layers.push_back({NormalForm{}});
    b->distance.emplace(NormalForm{}, 0);
    for (int r = 1; r <= radius; ++r) {
      std::vector<NormalForm> next;
      for (auto const& v : b->layers.back()) {
        for (auto const& x : x_letter_elements_) {
          NormalForm w = spec_.multiply(v, x);
          if (b->distance.emplace(w, r).second) next.push_back(std::move(w));
        }
      }
      b->layers.push_back(std::move(next));
    }
    ball_ = std::move(b);
  });
  return *ball_;
}

Coord Metrics::search_x_length(NormalForm const& g) const {
  auto const& b = ball();
  if (auto it = b.distance.find(g); it != b.distance.end()) return it->second;
  Coord radius = static_cast<Coord>(b.layers.size()) - 1;
  Coord upper = closed_form_x_length(g);
  Coord limit = std::min(upper, 2 * radius);
  for (Coord d = radius + 1; d <= limit; ++d) {
    Coord k = (d + 1) / 2;
    for (auto const& w : b.layers[static_cast<std::size_t>(k)]) {
      auto it = b.distance.find(spec_.multiply(spec_.invert(w), g));
      if (it != b.distance.end() && it->second <= d - k) return d;
    }
  }
  if (upper <= 2 * radius) return upper;
  throw CapExceeded("bfs_radius_cap",
                    "x_length of " + spec_.format(g) + " exceeds radius cap " +
                        std::to_string(options_.bfs_radius_cap));
}

Coord Metrics::x_length(NormalForm const& g) const {
  if (closed_form()) return closed_form_x_length(g);
  {
    std::shared_lock lock(memo_mutex_);
    if (auto it = x_memo_.find(g); it != x_memo_.end()) return it->second;
  }
  Coord d = search_x_length(g);
  std::unique_lock lock(memo_mutex_);
  x_memo_.emplace(g, d);
  return d;
}

Metrics::RelSearch Metrics::search_rel(NormalForm const& g) const {
  RelSearch result;
  if (g.is_identity()) {
    result.words.push_back({});
    return result;
  }
  // In a geodesic every H-letter is the only H-letter of its merge class, so
  // its norm is bounded by |g| plus one piece from each other letter.
  Coord upper = closed_form_rel_length(g);
  Coord piece = 1;
  for (auto const& e : spec_.extra_x_elements()) {
    for (auto const& s : e.syllables()) piece = std::max(piece, spec_.syllable_norm(s));
  }
  Coord target_norm = 0;
  for (auto const& s : g.syllables()) target_norm = std::max(target_norm, spec_.syllable_norm(s));
  Coord bound = target_norm + (upper - 1) * piece;

  std::vector<EdgeLabel> letters = x_alphabet_;
  std::vector<NormalForm> elements = x_letter_elements_;
  for (FactorId p : spec_.peripheral_factors()) {
    for (auto& v : box_vectors(spec_, p, bound)) {
      elements.push_back(spec_.element(p, v));
      letters.push_back(EdgeLabel::peripheral(p, std::move(v)));
    }
  }

  struct Side {
    std::vector<NormalForm> nodes;
    std::unordered_map<NormalForm, std::uint32_t, NormalFormHash> index;
    std::vector<Coord> dist;
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> preds;
    std::vector<std::uint32_t> frontier;
    Coord radius = 0;
  };
  auto seed = [](Side& s, NormalForm const& start) {
    s.nodes.push_back(start);
    s.index.emplace(start, 0);
    s.dist.push_back(0);
    s.preds.emplace_back();
    s.frontier.push_back(0);
  };
  Side fwd;
  Side bwd;
  seed(fwd, NormalForm{});
  seed(bwd, g);
  std::size_t states = 2;

  std::vector<std::uint32_t> meeting;
  while (meeting.empty()) {
    if (fwd.radius + bwd.radius >= upper) break;  // unreachable: upper is attained
    Side& side = fwd.frontier.size() <= bwd.frontier.size() ? fwd : bwd;
    Side& other = &side == &fwd ? bwd : fwd;
    std::vector<std::uint32_t> next;
    Coord r = side.radius + 1;
    for (std::uint32_t u : side.frontier) {
      for (std::uint32_t li = 0; li < elements.size(); ++li) {
        NormalForm w = spec_.multiply(side.nodes[u], elements[li]);
        auto [it, fresh] = side.index.emplace(w, static_cast<std::uint32_t>(side.nodes.size()));
        if (fresh) {
          side.nodes.push_back(std::move(w));
          side.dist.push_back(r);
          side.preds.push_back({{u, li}});
          next.push_back(it->second);
          if (++states > options_.search_state_cap) {
            throw CapExceeded("search_state_cap",
                              "relative geodesic search for " + spec_.format(g));
          }
        } else if (side.dist[it->second] == r) {
          side.preds[it->second].emplace_back(u, li);
        }
      }
    }
    side.frontier = std::move(next);
    side.radius = r;
    for (std::uint32_t v : side.frontier) {
      auto it = other.index.find(side.nodes[v]);
      if (it != other.index.end()) meeting.push_back(&side == &fwd ? v : it->second);
    }
  }
  if (meeting.empty()) {
    // No shortcut exists; fall back to the closed-form spelling set.
    result.distance = upper;
  } else {
    result.distance = fwd.radius + bwd.radius;
  }

  // Enumerate words through midpoints (forward radius, backward radius).
  auto forward_words = [&](auto&& self, std::uint32_t v) -> std::vector<LabelWord> {
    if (fwd.dist[v] == 0) return {LabelWord{}};
    std::vector<LabelWord> out;
    for (auto [u, li] : fwd.preds[v]) {
      for (auto w : self(self, u)) {
        w.push_back(letters[li]);
        out.push_back(std::move(w));
      }
    }
    return out;
  };
  auto backward_words = [&](auto&& self, std::uint32_t v) -> std::vector<LabelWord> {
    if (bwd.dist[v] == 0) return {LabelWord{}};
    std::vector<LabelWord> out;
    for (auto [u, li] : bwd.preds[v]) {
      for (auto w : self(self, u)) {
        w.insert(w.begin(), inverse_label(spec_, letters[li]));
        out.push_back(std::move(w));
      }
    }
    return out;
  };
  if (meeting.empty()) {
    result.words.push_back(rel_geodesic_word(g));
    return result;
  }
  std::sort(meeting.begin(), meeting.end());
  meeting.erase(std::unique(meeting.begin(), meeting.end()), meeting.end());
  for (std::uint32_t m : meeting) {
    auto const& mid = fwd.nodes[m];
    std::uint32_t mb = bwd.index.at(mid);
    if (fwd.dist[m] + bwd.dist[mb] != result.distance) continue;
    for (auto const& head : forward_words(forward_words, m)) {
      for (auto const& tail : backward_words(backward_words, mb)) {
        LabelWord w = head;
        w.insert(w.end(), tail.begin(), tail.end());
        result.words.push_back(std::move(w));
      }
    }
  }
  std::sort(result.words.begin(), result.words.end());
  result.words.erase(std::unique(result.words.begin(), result.words.end()),
                     result.words.end());
  return result;
}

Coord Metrics::rel_length(NormalForm const& g) const {
  if (closed_form()) return closed_form_rel_length(g);
  {
    std::shared_lock lock(memo_mutex_);
    if (auto it = rel_memo_.find(g); it != rel_memo_.end()) return it->second;
  }
  Coord d = search_rel(g).distance;
  std::unique_lock lock(memo_mutex_);
  rel_memo_.emplace(g, d);
  return d;
}

LabelWord Metrics::shortest_x_word(NormalForm const& g) const {
  if (closed_form()) {
    LabelWord out;
    for (auto const& s : g.syllables()) {
      auto w = least_spelling(spec_, s);
      out.insert(out.end(), w.begin(), w.end());
    }
    return out;
  }
  LabelWord out;
  NormalForm rest = g;
  Coord remaining = x_length(rest);
  while (remaining > 0) {
    bool stepped = false;
    for (std::size_t i = 0; i < x_alphabet_.size(); ++i) {
      NormalForm next = spec_.multiply(spec_.invert(x_letter_elements_[i]), rest);
      if (x_length(next) == remaining - 1) {
        out.push_back(x_alphabet_[i]);
        rest = std::move(next);
        --remaining;
        stepped = true;
        break;
      }
    }
    if (!stepped) throw Error("shortest_x_word: no descending letter (metric inconsistent)");
  }
  return out;
}

LabelWord Metrics::rel_geodesic_word(NormalForm const& g) const {
  if (closed_form()) {
    LabelWord out;
    for (auto const& s : g.syllables()) {
      if (spec_.is_peripheral(s.factor)) {
        out.push_back(EdgeLabel::peripheral(s.factor, s.coords));
      } else {
        auto w = least_spelling(spec_, s);
        out.insert(out.end(), w.begin(), w.end());
      }
    }
    return out;
  }
  auto search = search_rel(g);
  return search.words.front();
}

std::vector<LabelWord> Metrics::rel_geodesic_words(NormalForm const& g, std::size_t cap) const {
  if (!closed_form()) {
    auto search = search_rel(g);
    if (search.words.size() > cap) {
      throw CapExceeded("label_cap", std::to_string(search.words.size()) +
                                         " geodesic labelings for " + spec_.format(g));
    }
    return search.words;
  }
  std::vector<std::vector<LabelWord>> options;
  std::size_t total = 1;
  for (auto const& s : g.syllables()) {
    std::vector<LabelWord> opts;
    if (spec_.is_peripheral(s.factor)) {
      opts.push_back({EdgeLabel::peripheral(s.factor, s.coords)});
      if (spec_.syllable_x_length(s) == 1) {
        for (auto& w : syllable_spellings(s)) opts.push_back(std::move(w));
      }
    } else {
      opts = syllable_spellings(s);
    }
    total *= opts.size();
    if (total > cap) {
      throw CapExceeded("label_cap", "more than " + std::to_string(cap) +
                                         " geodesic labelings for " + spec_.format(g));
    }
    options.push_back(std::move(opts));
  }
  std::vector<LabelWord> out;
  std::vector<std::size_t> pick(options.size(), 0);
  while (true) {
    LabelWord w;
    for (std::size_t k = 0; k < options.size(); ++k) {
      auto const& part = options[k][pick[k]];
      w.insert(w.end(), part.begin(), part.end());
    }
    out.push_back(std::move(w));
    std::size_t k = options.size();
    while (k > 0 && pick[k - 1] + 1 == options[k - 1].size()) {
      pick[k - 1] = 0;
      --k;
    }
    if (k == 0) break;
    ++pick[k - 1];
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace relfix
