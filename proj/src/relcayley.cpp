#include "relfix/relcayley.hpp"

#include <algorithm>
#include <limits>

#include "relfix/parallel.hpp"

namespace relfix {

std::vector<NormalForm> vertices(Metrics const& m, Path const& p) {
  std::vector<NormalForm> out{p.base};
  out.reserve(p.length() + 1);
  for (auto const& l : p.labels) out.push_back(m.spec().multiply(out.back(), m.letter_element(l)));
  return out;
}

NormalForm terminus(Metrics const& m, Path const& p) {
  return m.spec().multiply(p.base, m.word_element(p.labels));
}

Path subpath(Metrics const& m, Path const& p, std::size_t from, std::size_t to) {
  LabelWord prefix(p.labels.begin(), p.labels.begin() + static_cast<std::ptrdiff_t>(from));
  return {m.spec().multiply(p.base, m.word_element(prefix)),
          LabelWord(p.labels.begin() + static_cast<std::ptrdiff_t>(from),
                    p.labels.begin() + static_cast<std::ptrdiff_t>(to))};
}

Path reversed(Metrics const& m, Path const& p) {
  return {terminus(m, p), m.invert_word(p.labels)};
}

Path concat(Metrics const&, Path const& a, Path const& b) {
  Path out = a;
  out.labels.insert(out.labels.end(), b.labels.begin(), b.labels.end());
  return out;
}

Path translate(Metrics const& m, NormalForm const& g, Path const& p) {
  return {m.spec().multiply(g, p.base), p.labels};
}

bool in_peripheral(GroupSpec const&, NormalForm const& g, FactorId factor) {
  return g.is_identity() || (g.size() == 1 && g.front().factor == factor);
}

Path canonical_geodesic(Metrics const& m, NormalForm const& g, NormalForm const& h) {
  auto const& s = m.spec();
  return {g, m.rel_geodesic_word(s.multiply(s.invert(g), h))};
}

std::vector<Path> geodesic_labelings(Metrics const& m, NormalForm const& g, NormalForm const& h,
                                     std::size_t cap) {
  auto const& s = m.spec();
  std::vector<Path> out;
  for (auto& w : m.rel_geodesic_words(s.multiply(s.invert(g), h), cap)) {
    out.push_back({g, std::move(w)});
  }
  return out;
}

Triangle geodesic_triangle(Metrics const& m, NormalForm const& x, NormalForm const& y,
                           NormalForm const& z) {
  return {x, y, z,
          {canonical_geodesic(m, x, y), canonical_geodesic(m, y, z), canonical_geodesic(m, z, x)}};
}

std::vector<Component> components(Metrics const& m, Path const& p) {
  std::vector<Component> out;
  auto verts = vertices(m, p);
  std::size_t i = 0;
  while (i < p.length()) {
    if (!p.labels[i].is_h()) {
      ++i;
      continue;
    }
    FactorId factor = p.labels[i].index;
    std::size_t j = i + 1;
    while (j < p.length() && p.labels[j].is_h() && p.labels[j].index == factor) ++j;
    out.push_back({i, j, factor, verts[i], verts[j]});
    i = j;
  }
  return out;
}

bool are_connected(GroupSpec const& spec, Component const& a, Component const& b) {
  if (a.factor != b.factor) return false;
  return in_peripheral(spec, spec.multiply(spec.invert(a.entry), b.entry), a.factor);
}

bool is_without_backtracking(Metrics const& m, Path const& p) {
  auto comps = components(m, p);
  for (std::size_t i = 0; i < comps.size(); ++i) {
    for (std::size_t j = i + 1; j < comps.size(); ++j) {
      if (are_connected(m.spec(), comps[i], comps[j])) return false;
    }
  }
  return true;
}

bool is_geodesic(Metrics const& m, Path const& p) {
  return static_cast<Coord>(p.length()) == m.rel_distance(p.base, terminus(m, p));
}

bool is_quasigeodesic(Metrics const& m, Path const& p, Rational kappa, Rational c) {
  auto const& s = m.spec();
  auto verts = vertices(m, p);
  for (std::size_t i = 0; i < verts.size(); ++i) {
    NormalForm inv = s.invert(verts[i]);
    for (std::size_t j = i + 1; j < verts.size(); ++j) {
      Rational bound = kappa * Rational(m.rel_length(s.multiply(inv, verts[j]))) + c;
      if (Rational(static_cast<std::int64_t>(j - i)) > bound) return false;
    }
  }
  return true;
}

std::vector<std::size_t> phase_vertices(Metrics const& m, Path const& p) {
  std::vector<bool> inner(p.length() + 1, false);
  for (auto const& c : components(m, p)) {
    for (std::size_t v = c.start + 1; v < c.end; ++v) inner[v] = true;
  }
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v <= p.length(); ++v) {
    if (!inner[v]) out.push_back(v);
  }
  return out;
}

Coord component_x_length(Metrics const& m, Component const& c) {
  return m.x_distance(c.entry, c.exit);
}

Coord rel_distance_to_path(Metrics const& m, NormalForm const& z, Path const& p) {
  NormalForm zi = m.spec().invert(z);
  Coord best = std::numeric_limits<Coord>::max();
  for (auto const& v : vertices(m, p)) best = std::min(best, m.rel_length(m.spec().multiply(zi, v)));
  return best;
}

Coord x_distance_to_set(Metrics const& m, NormalForm const& z,
                        std::vector<NormalForm> const& targets) {
  NormalForm zi = m.spec().invert(z);
  Coord best = std::numeric_limits<Coord>::max();
  for (auto const& t : targets) {
    best = std::min(best, m.x_length(m.spec().multiply(zi, t)));
    if (best == 0) break;
  }
  return best;
}

Projection project(Metrics const& m, NormalForm const& z, Path const& line) {
  if (!is_geodesic(m, line)) throw PreconditionError("project: path is not geodesic");
  auto const& s = m.spec();
  auto verts = vertices(m, line);
  Projection out;
  out.distance = std::numeric_limits<Coord>::max();
  NormalForm zi = s.invert(z);
  for (std::size_t i = 0; i < verts.size(); ++i) {
    Coord d = m.rel_length(s.multiply(zi, verts[i]));
    if (d < out.distance) {
      out.distance = d;
      out.indices.clear();
    }
    if (d == out.distance) out.indices.push_back(i);
  }
  for (std::size_t i : out.indices) {
    Path p = canonical_geodesic(m, z, verts[i]);
    Path q = subpath(m, line, 0, i);
    Path r = subpath(m, line, i, line.length());
    for (auto const& [name, path] :
         {std::pair{"pq^-1", concat(m, p, reversed(m, q))}, std::pair{"pr", concat(m, p, r)}}) {
      bool qg = is_quasigeodesic(m, path, 3, 0);
      bool nb = is_without_backtracking(m, path);
      if (!qg || !nb) {
        out.violations.push_back(std::string(name) + (qg ? " backtracks" : " not (3,0)-qg") +
                                 " for z=" + s.format(z) + " at vertex " + std::to_string(i) +
                                 " of " + format_path(s, line));
      }
    }
  }
  return out;
}

bool four_k_check(Metrics const& m, Triangle const& t, Coord k, NormalForm const& u,
                  NormalForm const& v) {
  for (auto const* point : {&u, &v}) {
    for (auto const& side : t.sides) {
      if (rel_distance_to_path(m, *point, side) > k) {
        throw PreconditionError("four_k_check: " + m.spec().format(*point) +
                                " is farther than K from a side");
      }
    }
  }
  return m.rel_distance(u, v) <= 4 * k;
}

std::vector<NormalForm> four_k_candidates(Metrics const& m, Triangle const& t) {
  std::vector<NormalForm> out;
  for (auto const& side : t.sides) {
    for (auto const& v : vertices(m, side)) {
      out.push_back(v);
      for (auto const& x : m.x_alphabet()) out.push_back(m.spec().multiply(v, m.letter_element(x)));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

FourKScan four_k_scan(Metrics const& m, Triangle const& t, Coord k) {
  FourKScan out;
  std::vector<NormalForm> qualifying;
  for (auto const& u : four_k_candidates(m, t)) {
    bool near = std::all_of(t.sides.begin(), t.sides.end(), [&](Path const& side) {
      return rel_distance_to_path(m, u, side) <= k;
    });
    if (near) qualifying.push_back(u);
  }
  out.qualifying_points = qualifying.size();
  for (std::size_t i = 0; i < qualifying.size(); ++i) {
    for (std::size_t j = i; j < qualifying.size(); ++j) {
      ++out.pairs;
      if (!four_k_check(m, t, k, qualifying[i], qualifying[j])) {
        auto const& s = m.spec();
        out.violations.push_back("d(" + s.format(qualifying[i]) + ", " + s.format(qualifying[j]) +
                                 ") > 4K for K=" + std::to_string(k) + " in triangle (" +
                                 s.format(t.x) + ", " + s.format(t.y) + ", " + s.format(t.z) +
                                 ")");
      }
    }
  }
  return out;
}

namespace {

void check_pair(Metrics const& m, PathPair const& pair, Rational kappa, Rational c, Coord k,
                bool q_needs_no_backtracking) {
  auto const& s = m.spec();
  auto fail = [&](std::string const& why) {
    throw PreconditionError("malformed sample (" + why + "): " + format_path(s, pair.p) +
                            " / " + format_path(s, pair.q));
  };
  if (!is_quasigeodesic(m, pair.p, kappa, c)) fail("p not quasigeodesic");
  if (!is_quasigeodesic(m, pair.q, kappa, c)) fail("q not quasigeodesic");
  if (!is_without_backtracking(m, pair.p)) fail("p backtracks");
  if (q_needs_no_backtracking && !is_without_backtracking(m, pair.q)) fail("q backtracks");
  if (m.x_distance(pair.p.base, pair.q.base) > k) fail("start points too far");
  if (m.x_distance(terminus(m, pair.p), terminus(m, pair.q)) > k) fail("end points too far");
}

Json pair_params(Rational kappa, Rational c, Coord k) {
  auto text = [](Rational r) {
    return r.denominator() == 1 ? std::to_string(r.numerator())
                                : std::to_string(r.numerator()) + "/" +
                                      std::to_string(r.denominator());
  };
  return Json{{"kappa", text(kappa)}, {"c", text(c)}, {"k", k}};
}

}  // namespace

ProbeReport bcp_probe(Metrics const& m, std::vector<PathPair> const& pairs, Rational kappa,
                      Rational c, Coord k) {
  struct Partial {
    Coord unmatched_max = -1;
    Coord matched_max = -1;
    std::uint64_t matched = 0;
    std::uint64_t unmatched = 0;
  };
  auto partials = parallel_map<Partial>(pairs.size(), [&](std::size_t i) {
    auto const& pair = pairs[i];
    check_pair(m, pair, kappa, c, k, true);
    Partial out;
    auto cp = components(m, pair.p);
    auto cq = components(m, pair.q);
    for (auto const* from : {&cp, &cq}) {
      auto const& to = from == &cp ? cq : cp;
      for (auto const& s : *from) {
        bool found = false;
        for (auto const& t : to) {
          if (!are_connected(m.spec(), s, t)) continue;
          found = true;
          out.matched_max = std::max({out.matched_max, m.x_distance(s.entry, t.entry),
                                      m.x_distance(s.exit, t.exit)});
        }
        if (found) {
          ++out.matched;
        } else {
          ++out.unmatched;
          out.unmatched_max = std::max(out.unmatched_max, component_x_length(m, s));
        }
      }
    }
    return out;
  });
  ProbeReport r;
  r.check = "bcp";
  r.params = pair_params(kappa, c, k);
  r.samples = pairs.size();
  r.vacuous = pairs.empty();
  Partial total;
  for (auto const& p : partials) {
    total.unmatched_max = std::max(total.unmatched_max, p.unmatched_max);
    total.matched_max = std::max(total.matched_max, p.matched_max);
    total.matched += p.matched;
    total.unmatched += p.unmatched;
  }
  Coord a = std::max<Coord>(total.unmatched_max, 0);
  Coord b = std::max<Coord>(total.matched_max, 0);
  r.estimates["epsilon_a"] = a;
  r.estimates["epsilon_b"] = b;
  // Part (a) needs epsilon strictly above every unmatched component.
  r.estimates["epsilon"] = std::max(b, total.unmatched > 0 ? a + 1 : 0);
  r.details["matched_components"] = total.matched;
  r.details["unmatched_components"] = total.unmatched;
  return r;
}

ProbeReport qg_close_probe(Metrics const& m, std::vector<PathPair> const& pairs,
                           Rational kappa, Rational c, Coord k) {
  auto partials = parallel_map<Coord>(pairs.size(), [&](std::size_t i) {
    auto const& pair = pairs[i];
    check_pair(m, pair, kappa, c, k, false);
    auto vp = vertices(m, pair.p);
    auto vq = vertices(m, pair.q);
    std::vector<NormalForm> targets;
    for (std::size_t j : phase_vertices(m, pair.q)) targets.push_back(vq[j]);
    Coord worst = 0;
    for (std::size_t j : phase_vertices(m, pair.p)) {
      worst = std::max(worst, x_distance_to_set(m, vp[j], targets));
    }
    return worst;
  });
  ProbeReport r;
  r.check = "qgclose";
  r.params = pair_params(kappa, c, k);
  r.samples = pairs.size();
  r.vacuous = pairs.empty();
  Coord nu = 0;
  for (Coord v : partials) nu = std::max(nu, v);
  r.estimates["nu"] = nu;
  return r;
}

ProbeReport projection_rho_probe(Metrics const& m, std::vector<RhoSample> const& samples) {
  struct Partial {
    Coord excess = std::numeric_limits<Coord>::min();
    std::vector<std::string> violations;
  };
  auto partials = parallel_map<Partial>(samples.size(), [&](std::size_t i) {
    auto const& sample = samples[i];
    auto pa = project(m, sample.a, sample.line);
    auto pb = project(m, sample.b, sample.line);
    auto verts = vertices(m, sample.line);
    Coord base = m.rel_distance(sample.a, sample.b);
    Partial out;
    for (std::size_t x : pa.indices) {
      for (std::size_t y : pb.indices) {
        out.excess = std::max(out.excess, m.rel_distance(verts[x], verts[y]) - base);
      }
    }
    out.violations = std::move(pa.violations);
    out.violations.insert(out.violations.end(), pb.violations.begin(), pb.violations.end());
    return out;
  });
  ProbeReport r;
  r.check = "rho";
  r.samples = samples.size();
  r.vacuous = samples.empty();
  for (auto& p : partials) {
    r.raise("rho", p.excess);
    r.violations.insert(r.violations.end(), p.violations.begin(), p.violations.end());
  }
  if (samples.empty()) r.estimates["rho"] = 0;
  return r;
}

namespace {

EdgeLabel random_letter(Metrics const& m, DomainWindow const& window, SplitMix& rng) {
  auto const& x = m.x_alphabet();
  auto peripherals = m.spec().peripheral_factors();
  std::size_t choice = rng.below(x.size() + peripherals.size());
  if (choice < x.size()) return x[choice];
  FactorId f = peripherals[choice - x.size()];
  auto pool = factor_syllables(m.spec(), f, std::max<Coord>(1, window.max_factor_length));
  return EdgeLabel::peripheral(f, pool[rng.below(pool.size())].coords);
}

}  // namespace

std::vector<PathPair> sample_labeling_pairs(Metrics const& m, DomainWindow const& window,
                                            std::size_t count, std::uint64_t seed) {
  SplitMix rng(seed);
  std::vector<PathPair> out;
  for (std::size_t attempt = 0; out.size() < count && attempt < 8 * count + 8; ++attempt) {
    auto g = random_element(m.spec(), window, rng);
    auto h = random_element(m.spec(), window, rng);
    std::vector<Path> all;
    try {
      all = geodesic_labelings(m, g, h, 64);
    } catch (CapExceeded const&) {
      continue;
    }
    auto i = rng.below(all.size());
    auto j = rng.below(all.size());
    out.push_back({all[i], all[j]});
  }
  return out;
}

std::vector<PathPair> sample_quasigeodesic_pairs(Metrics const& m, DomainWindow const& window,
                                                 std::size_t count, std::uint64_t seed) {
  SplitMix rng(seed);
  std::vector<PathPair> out;
  for (std::size_t attempt = 0; out.size() < count && attempt < 8 * count + 8; ++attempt) {
    auto x = random_element(m.spec(), window, rng);
    auto y = random_element(m.spec(), window, rng);
    Path p = canonical_geodesic(m, x, y);
    p.labels.push_back(random_letter(m, window, rng));
    if (!is_without_backtracking(m, p)) continue;
    out.push_back({p, canonical_geodesic(m, x, terminus(m, p))});
  }
  return out;
}

std::vector<RhoSample> sample_rho(Metrics const& m, DomainWindow const& window,
                                  std::size_t count, std::uint64_t seed) {
  SplitMix rng(seed);
  std::vector<RhoSample> out;
  for (std::size_t i = 0; i < count; ++i) {
    auto x = random_element(m.spec(), window, rng);
    auto y = random_element(m.spec(), window, rng);
    auto a = random_element(m.spec(), window, rng);
    auto b = random_element(m.spec(), window, rng);
    out.push_back({canonical_geodesic(m, x, y), a, b});
  }
  return out;
}

std::string format_label(GroupSpec const& spec, EdgeLabel const& label) {
  switch (label.kind) {
    case EdgeLabel::Kind::kGenerator:
      return spec.generator_name(label.index) + (label.sign < 0 ? "^-1" : "");
    case EdgeLabel::Kind::kExtra:
      return "(" + spec.format(spec.extra_x_elements()[label.index]) + ")" +
             (label.sign < 0 ? "^-1" : "");
    case EdgeLabel::Kind::kPeripheral: {
      std::string out = spec.factor(label.index).name + "[";
      for (std::size_t j = 0; j < label.coords.size(); ++j) {
        out += (j ? "," : "") + std::to_string(label.coords[j]);
      }
      return out + "]";
    }
  }
  return "?";
}

std::string format_path(GroupSpec const& spec, Path const& p) {
  std::string out = spec.format(p.base) + ":";
  for (auto const& l : p.labels) out += " " + format_label(spec, l);
  return out;
}

}  // namespace relfix
