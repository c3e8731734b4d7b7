#include "oracles.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace oracle {

namespace {

Coord mod(Coord x, Coord d) {
  Coord r = x % d;
  return r < 0 ? r + d : r;
}

void normalize(relfix::GroupSpec const& spec, Letter& l) {
  auto const& f = spec.factor(l.factor);
  for (std::size_t j = 0; j < l.v.size(); ++j) {
    if (f.modulus(j) != 0) l.v[j] = mod(l.v[j], f.modulus(j));
  }
}

bool trivial(Letter const& l) {
  for (Coord c : l.v) {
    if (c != 0) return false;
  }
  return true;
}

bool in_window(relfix::GroupSpec const& spec, Word const& w, relfix::DomainWindow const& win) {
  if (w.size() > win.max_syllables) return false;
  for (auto const& l : w) {
    auto const& f = spec.factor(l.factor);
    for (std::size_t j = 0; j < l.v.size(); ++j) {
      Coord c = l.v[j];
      Coord d = f.modulus(j);
      if (d != 0 && c > d / 2) c -= d;
      if (std::abs(c) > win.max_factor_length) return false;
    }
  }
  return true;
}

// All nonzero vectors of a factor with symmetric max-norm <= bound.
std::vector<Letter> vectors(relfix::GroupSpec const& spec, relfix::FactorId id, Coord bound) {
  auto const& f = spec.factor(id);
  std::vector<Letter> out{{id, {}}};
  for (std::size_t j = 0; j < f.dimension(); ++j) {
    std::vector<Letter> next;
    for (auto const& partial : out) {
      for (Coord c = -bound; c <= bound; ++c) {
        Coord d = f.modulus(j);
        if (d != 0 && (c <= -((d + 1) / 2) || c > d / 2)) continue;
        Letter l = partial;
        l.v.push_back(c);
        next.push_back(std::move(l));
      }
    }
    out = std::move(next);
  }
  std::vector<Letter> nonzero;
  for (auto& l : out) {
    normalize(spec, l);
    if (!trivial(l)) nonzero.push_back(std::move(l));
  }
  return nonzero;
}

}  // namespace

Word rewrite(relfix::GroupSpec const& spec, Word w) {
  for (auto& l : w) normalize(spec, l);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (trivial(w[i])) {
        w.erase(w.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
      if (i + 1 < w.size() && w[i].factor == w[i + 1].factor) {
        for (std::size_t j = 0; j < w[i].v.size(); ++j) w[i].v[j] += w[i + 1].v[j];
        normalize(spec, w[i]);
        w.erase(w.begin() + static_cast<std::ptrdiff_t>(i + 1));
        changed = true;
        break;
      }
    }
  }
  return w;
}

relfix::NormalForm to_normal_form(relfix::GroupSpec const& spec, Word const& w) {
  relfix::NormalForm::Syllables s;
  for (auto const& l : rewrite(spec, w)) {
    s.push_back({l.factor, relfix::Coords(l.v.begin(), l.v.end())});
  }
  return relfix::NormalForm(std::move(s));
}

Word from_normal_form(relfix::NormalForm const& g) {
  Word w;
  for (auto const& s : g.syllables()) {
    w.push_back({s.factor, std::vector<Coord>(s.coords.begin(), s.coords.end())});
  }
  return w;
}

Word concat(Word a, Word const& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<Coord> key(relfix::GroupSpec const&, Word const& reduced) {
  std::vector<Coord> k;
  for (auto const& l : reduced) {
    k.push_back(-1 - static_cast<Coord>(l.factor));
    k.insert(k.end(), l.v.begin(), l.v.end());
  }
  return k;
}

std::vector<Coord> key(relfix::NormalForm const& g) {
  return key(relfix::GroupSpec{}, from_normal_form(g));
}

std::map<std::vector<Coord>, int> restricted_bfs(relfix::GroupSpec const& spec,
                                                 relfix::DomainWindow const& window,
                                                 bool relative) {
  std::vector<Letter> letters;
  for (std::size_t i = 0; i < spec.generator_count(); ++i) {
    auto ref = spec.generator(i);
    for (int sign : {1, -1}) {
      Letter l{ref.factor, std::vector<Coord>(spec.factor(ref.factor).dimension(), 0)};
      l.v[ref.coord] = sign;
      normalize(spec, l);
      letters.push_back(std::move(l));
    }
  }
  if (relative) {
    for (relfix::FactorId f = 0; f < spec.factor_count(); ++f) {
      if (spec.factor(f).rank < 2) continue;
      for (auto& l : vectors(spec, f, window.max_factor_length)) letters.push_back(std::move(l));
    }
  }
  std::map<std::vector<Coord>, int> dist;
  std::deque<Word> queue{Word{}};
  dist[key(spec, Word{})] = 0;
  while (!queue.empty()) {
    Word u = std::move(queue.front());
    queue.pop_front();
    int du = dist.at(key(spec, u));
    for (auto const& l : letters) {
      Word v = rewrite(spec, concat(u, {l}));
      if (!in_window(spec, v, window)) continue;
      auto [it, fresh] = dist.emplace(key(spec, v), du + 1);
      if (fresh) queue.push_back(std::move(v));
    }
  }
  return dist;
}

std::map<std::vector<Coord>, int> ball_bfs(relfix::GroupSpec const& spec, int radius,
                                           Coord h_box) {
  std::vector<Word> letters;
  for (std::size_t i = 0; i < spec.generator_count(); ++i) {
    auto ref = spec.generator(i);
    for (int sign : {1, -1}) {
      Letter l{ref.factor, std::vector<Coord>(spec.factor(ref.factor).dimension(), 0)};
      l.v[ref.coord] = sign;
      normalize(spec, l);
      letters.push_back({std::move(l)});
    }
  }
  for (auto const& e : spec.extra_x_elements()) {
    Word w = from_normal_form(e);
    letters.push_back(w);
    Word inv;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      Letter l = *it;
      for (auto& c : l.v) c = -c;
      inv.push_back(std::move(l));
    }
    letters.push_back(rewrite(spec, inv));
  }
  if (h_box > 0) {
    for (relfix::FactorId f = 0; f < spec.factor_count(); ++f) {
      if (spec.factor(f).rank < 2) continue;
      for (auto& l : vectors(spec, f, h_box)) letters.push_back({std::move(l)});
    }
  }
  std::map<std::vector<Coord>, int> dist;
  std::vector<Word> layer{Word{}};
  dist[key(spec, Word{})] = 0;
  for (int r = 1; r <= radius; ++r) {
    std::vector<Word> next;
    for (auto const& u : layer) {
      for (auto const& l : letters) {
        Word v = rewrite(spec, concat(u, l));
        if (dist.emplace(key(spec, v), r).second) next.push_back(std::move(v));
      }
    }
    layer = std::move(next);
  }
  return dist;
}

std::uint64_t count_window(relfix::GroupSpec const& spec, relfix::DomainWindow const& window) {
  std::vector<std::uint64_t> per_factor;
  for (relfix::FactorId f = 0; f < spec.factor_count(); ++f) {
    per_factor.push_back(vectors(spec, f, window.max_factor_length).size());
  }
  auto rec = [&](auto&& self, std::size_t left, int last) -> std::uint64_t {
    std::uint64_t total = 1;
    if (left == 0) return total;
    for (std::size_t f = 0; f < per_factor.size(); ++f) {
      if (static_cast<int>(f) == last) continue;
      total += per_factor[f] * self(self, left - 1, static_cast<int>(f));
    }
    return total;
  };
  return rec(rec, window.max_syllables, -1);
}

relfix::NormalForm apply_images(relfix::GroupSpec const& spec,
                                std::vector<relfix::Word> const& images,
                                relfix::NormalForm const& g) {
  Word out;
  for (auto const& syl : g.syllables()) {
    for (std::size_t j = 0; j < syl.coords.size(); ++j) {
      Coord v = syl.coords[j];
      if (v == 0) continue;
      std::size_t gen = 0;
      while (spec.generator(gen).factor != syl.factor || spec.generator(gen).coord != j) ++gen;
      Word piece;
      for (auto const& l : images[gen]) piece.push_back({l.factor, {l.coords.begin(), l.coords.end()}});
      if (v < 0) {
        std::reverse(piece.begin(), piece.end());
        for (auto& l : piece) {
          for (auto& c : l.v) c = -c;
        }
      }
      for (Coord k = 0; k < (v < 0 ? -v : v); ++k) out = concat(out, piece);
    }
  }
  return to_normal_form(spec, rewrite(spec, out));
}

std::vector<relfix::Word> forward_images(
    relfix::GroupSpec const& spec, std::vector<std::pair<std::string, relfix::Word>> const& block) {
  std::vector<relfix::Word> out(spec.generator_count());
  for (auto const& [name, word] : block) out[*spec.find_generator(name)] = word;
  return out;
}

std::string read_data(std::string const& name) {
  std::ifstream in(std::string(RELFIX_DATA_DIR) + "/" + name);
  if (!in) throw std::runtime_error("cannot read data file " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace oracle
