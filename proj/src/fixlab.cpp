#include "relfix/fixlab.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <unordered_set>

#include "relfix/parallel.hpp"

namespace relfix {

namespace {

using FixedSet = std::unordered_set<NormalForm, NormalFormHash>;

// Stored witnesses per report; the full count goes to details.
constexpr std::size_t kViolationListCap = 100;

void add_violation(ProbeReport& r, std::string message) {
  std::uint64_t n = r.details.value("violation_count", std::uint64_t{0}) + 1;
  r.details["violation_count"] = n;
  if (r.violations.size() < kViolationListCap) r.violations.push_back(std::move(message));
}

std::string window_text(DomainWindow const& w) {
  return "(" + std::to_string(w.max_syllables) + "," + std::to_string(w.max_factor_length) + ")";
}

Json window_json(DomainWindow const& w) {
  return Json{{"syl", w.max_syllables}, {"coord", w.max_factor_length}};
}

FixedSet as_set(FixedSample const& fixed) {
  return FixedSet(fixed.elements.begin(), fixed.elements.end());
}

std::string path_text(Automorphism const& phi, Path const& p) {
  return format_path(phi.spec(), p);
}

std::string triangle_text(GroupSpec const& s, Triangle const& t) {
  return "(" + s.format(t.x) + ", " + s.format(t.y) + ", " + s.format(t.z) + ")";
}

// Indices of `count` distinct draws from [0, n) in increasing order, or all
// of them when count >= n.
std::vector<std::uint64_t> sample_indices(std::uint64_t n, std::size_t count, std::uint64_t seed) {
  std::vector<std::uint64_t> out;
  if (n <= count) {
    out.resize(n);
    for (std::uint64_t i = 0; i < n; ++i) out[i] = i;
    return out;
  }
  SplitMix rng(seed);
  std::unordered_set<std::uint64_t> seen;
  while (out.size() < count) {
    std::uint64_t i = rng.below(n);
    if (seen.insert(i).second) out.push_back(i);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Path> labelings_or_canonical(Metrics const& m, NormalForm const& x,
                                         NormalForm const& y, std::size_t cap, bool* truncated) {
  try {
    return geodesic_labelings(m, x, y, cap);
  } catch (CapExceeded const&) {
    if (truncated) *truncated = true;
    return {canonical_geodesic(m, x, y)};
  }
}

// bcp estimate at (A, A, 0) on fixed-endpoint geodesics against their images.
Coord epsilon_images(Automorphism const& phi, std::vector<Path> const& geodesics) {
  std::vector<PathPair> pairs;
  for (auto const& p : geodesics) pairs.push_back({p, image_path(phi, p).path});
  Rational a = quasigeodesic_constant_A(1, 0, phi.S());
  return bcp_probe(phi.metrics(), pairs, a, a, 0).estimates.at("epsilon");
}

}  // namespace

bool FixedSample::contains(NormalForm const& g) const {
  return std::find(elements.begin(), elements.end(), g) != elements.end();
}

bool is_fixed(Automorphism const& phi, NormalForm const& g) { return phi.apply(g) == g; }

FixedSample enumerate_fixed(Automorphism const& phi, DomainWindow const& window) {
  auto domain = enumerate_domain(phi.base_spec(), window);
  auto keep = parallel_map<char>(domain.size(), [&](std::size_t i) {
    return static_cast<char>(is_fixed(phi, domain[i]));
  });
  FixedSample out{window, {}};
  for (std::size_t i = 0; i < domain.size(); ++i) {
    if (keep[i]) out.elements.push_back(std::move(domain[i]));
  }
  return out;
}

std::vector<NormalForm> centralizer_oracle(GroupSpec const& spec, NormalForm const& g,
                                           DomainWindow const& window) {
  std::vector<NormalForm> out;
  for (auto& h : enumerate_domain(spec, window)) {
    if (spec.multiply(h, g) == spec.multiply(g, h)) out.push_back(std::move(h));
  }
  return out;
}

std::vector<std::pair<NormalForm, NormalForm>> fixed_pairs(FixedSample const& fixed,
                                                           FixlabOptions const& options) {
  std::uint64_t n = fixed.elements.size();
  std::vector<std::pair<NormalForm, NormalForm>> out;
  if (n < 2) return out;
  // Ordered pairs x != y, indexed i * (n - 1) + j' with j' skipping i.
  for (std::uint64_t k : sample_indices(n * (n - 1), options.max_pairs, options.seed)) {
    std::uint64_t i = k / (n - 1);
    std::uint64_t j = k % (n - 1);
    if (j >= i) ++j;
    out.emplace_back(fixed.elements[i], fixed.elements[j]);
  }
  return out;
}

std::vector<Path> fixed_pair_geodesics(Automorphism const& phi, FixedSample const& fixed,
                                       FixlabOptions const& options, std::uint64_t* truncated) {
  auto pairs = fixed_pairs(fixed, options);
  struct Out {
    std::vector<Path> paths;
    bool truncated = false;
  };
  auto parts = parallel_map<Out>(pairs.size(), [&](std::size_t i) {
    Out o;
    o.paths = labelings_or_canonical(phi.metrics(), pairs[i].first, pairs[i].second,
                                     options.label_cap, &o.truncated);
    return o;
  });
  std::vector<Path> out;
  std::uint64_t cut = 0;
  for (auto& part : parts) {
    cut += part.truncated;
    for (auto& p : part.paths) out.push_back(std::move(p));
  }
  if (truncated) *truncated = cut;
  return out;
}

std::vector<Triangle> fixed_triangles(Automorphism const& phi, FixedSample const& fixed,
                                      FixlabOptions const& options) {
  std::uint64_t n = fixed.elements.size();
  auto picks = sample_indices(n * n * n, options.max_triangles, options.seed ^ 0x7452u);
  return parallel_map<Triangle>(picks.size(), [&](std::size_t i) {
    std::uint64_t k = picks[i];
    auto const& e = fixed.elements;
    return geodesic_triangle(phi.metrics(), e[k / (n * n)], e[(k / n) % n], e[k % n]);
  });
}

// --- quasiconvexity --------------------------------------------------------

ProbeReport sigma_probe(Automorphism const& phi,
                        std::vector<std::pair<NormalForm, NormalForm>> const& pairs,
                        FixedSample const& fixed, std::size_t label_cap) {
  struct Part {
    Coord sigma = 0;
    std::string witness;
    bool skipped = false;
    std::uint64_t paths = 0;
  };
  auto const& m = phi.metrics();
  auto parts = parallel_map<Part>(pairs.size(), [&](std::size_t i) {
    Part out;
    std::vector<Path> paths;
    try {
      paths = geodesic_labelings(m, pairs[i].first, pairs[i].second, label_cap);
    } catch (CapExceeded const&) {
      out.skipped = true;
      return out;
    }
    out.paths = paths.size();
    for (auto const& p : paths) {
      auto verts = vertices(m, p);
      for (std::size_t v = 0; v < verts.size(); ++v) {
        Coord d = x_distance_to_set(m, verts[v], fixed.elements);
        if (d > out.sigma || out.witness.empty()) {
          out.sigma = std::max(out.sigma, d);
          out.witness = path_text(phi, p) + " @ vertex " + std::to_string(v);
        }
      }
    }
    return out;
  });
  ProbeReport r;
  r.check = "sigma";
  r.params = Json{{"label_cap", label_cap}, {"fixed", fixed.elements.size()}};
  r.samples = pairs.size();
  Coord sigma = 0;
  std::string witness;
  std::uint64_t skipped = 0;
  std::uint64_t paths = 0;
  for (auto const& p : parts) {
    skipped += p.skipped;
    paths += p.paths;
    if (!p.witness.empty() && (witness.empty() || p.sigma > sigma)) {
      sigma = std::max(sigma, p.sigma);
      witness = p.witness;
    }
  }
  r.estimates["sigma"] = sigma;
  r.vacuous = paths == 0;
  r.details["skipped_pairs"] = skipped;
  r.details["paths"] = paths;
  r.details["witness"] = witness;
  return r;
}

ProbeReport quasiconvexity_profile(Automorphism const& phi, DomainWindow const& window,
                                   std::size_t label_cap) {
  std::vector<DomainWindow> ladder;
  for (std::size_t i = 1; i < window.max_syllables; ++i) {
    ladder.push_back({i, std::min<Coord>(static_cast<Coord>(i), window.max_factor_length)});
  }
  ladder.push_back(window);
  ProbeReport r;
  r.check = "qc_profile";
  r.params = Json{{"window", window_json(window)}, {"label_cap", label_cap}};
  r.details["ladder"] = Json::array();
  FixlabOptions all;
  all.max_pairs = std::numeric_limits<std::size_t>::max();
  for (auto const& w : ladder) {
    auto fixed = enumerate_fixed(phi, w);
    auto pairs = fixed_pairs(fixed, all);
    auto step = sigma_probe(phi, pairs, fixed, label_cap);
    r.details["ladder"].push_back(Json{{"window", window_json(w)},
                                       {"fixed", fixed.elements.size()},
                                       {"pairs", pairs.size()},
                                       {"sigma", step.estimates["sigma"]},
                                       {"skipped_pairs", step.details["skipped_pairs"]}});
    if (w == window) {
      r.samples = pairs.size();
      r.estimates["sigma"] = step.estimates["sigma"];
      r.vacuous = step.vacuous;
      r.details["witness"] = step.details["witness"];
      r.details["skipped_pairs"] = step.details["skipped_pairs"];
    }
  }
  return r;
}

// --- fineness --------------------------------------------------------------

Component companion_component(Automorphism const& phi, Path const&, ImagePath const& image,
                              Component const& c) {
  auto const& m = phi.metrics();
  std::size_t idx = *image.companion_index.at(c.start);
  Path edge = subpath(m, image.path, idx, idx + 1);
  return {idx, idx + 1, image.path.labels[idx].index, edge.base, terminus(m, edge)};
}

bool connected_to_companion(Automorphism const& phi, Path const& p, ImagePath const& image,
                            Component const& c) {
  return are_connected(phi.spec(), c, companion_component(phi, p, image, c));
}

bool is_e_fine(Automorphism const& phi, Path const& p, Coord e) {
  auto const& m = phi.metrics();
  if (!is_geodesic(m, p)) throw PreconditionError("is_e_fine: path is not geodesic");
  std::optional<ImagePath> image;
  for (auto const& c : components(m, p)) {
    if (component_x_length(m, c) <= e) continue;
    if (!image) image = image_path(phi, p);
    if (connected_to_companion(phi, p, *image, c)) return false;
  }
  return true;
}

FineSegments fine_segments(Automorphism const& phi, NormalForm const& x, Coord e, Coord r,
                           DomainWindow const& window, std::size_t label_cap) {
  if (!is_fixed(phi, x)) throw PreconditionError("fine_segments: base point is not fixed");
  auto const& m = phi.metrics();
  auto fixed = enumerate_fixed(phi, window);
  auto parts = parallel_map<std::vector<LabelWord>>(fixed.elements.size(), [&](std::size_t i) {
    std::vector<LabelWord> out;
    for (auto const& p : labelings_or_canonical(m, x, fixed.elements[i], label_cap, nullptr)) {
      if (!is_e_fine(phi, p, e)) continue;
      std::size_t top = std::min<std::size_t>(p.length(), static_cast<std::size_t>(r));
      for (std::size_t len = 0; len <= top; ++len) {
        out.emplace_back(p.labels.begin(), p.labels.begin() + static_cast<std::ptrdiff_t>(len));
      }
    }
    return out;
  });
  std::vector<LabelWord> words;
  for (auto& part : parts) words.insert(words.end(), part.begin(), part.end());
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  FineSegments out;
  for (auto& w : words) {
    Path p{x, std::move(w)};
    out.c_hat = std::max(out.c_hat, m.x_distance(x, terminus(m, p)));
    out.segments.push_back(std::move(p));
  }
  return out;
}

std::int64_t alpha_bound(Coord e, Coord eps, Coord s, Coord n) {
  constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();
  __int128 value = static_cast<__int128>(e) + eps + 2;
  __int128 ratio = static_cast<__int128>(s) + 2 * eps + 2;
  for (Coord i = 0; i <= n; ++i) {
    value *= ratio;
    if (value > kMax) return kMax;
  }
  return static_cast<std::int64_t>(value);
}

ProbeReport cascades_check(Automorphism const& phi, std::vector<Path> const& samples, Coord e,
                           Coord eps) {
  auto const& m = phi.metrics();
  Coord s = phi.S();
  struct Part {
    std::vector<std::int64_t> margins;
    std::vector<std::string> violations;
  };
  auto parts = parallel_map<Part>(samples.size(), [&](std::size_t i) {
    auto const& p = samples[i];
    if (!is_e_fine(phi, p, e)) throw PreconditionError("cascades_check: sample is not E-fine");
    Part out;
    for (auto const& c : components(m, p)) {
      Coord lx = component_x_length(m, c);
      std::int64_t bound = alpha_bound(e, eps, s, static_cast<Coord>(c.start));
      out.margins.push_back(bound - lx);
      if (lx > bound) {
        out.violations.push_back("l_X(e)=" + std::to_string(lx) + " > alpha(" +
                                 std::to_string(c.start) + ")=" + std::to_string(bound) +
                                 " on " + path_text(phi, p));
      }
    }
    return out;
  });
  ProbeReport r;
  r.check = "cascades";
  r.params = Json{{"E", e}, {"epsilon", eps}, {"S", s}};
  r.samples = samples.size();
  std::vector<std::int64_t> margins;
  for (auto& part : parts) {
    margins.insert(margins.end(), part.margins.begin(), part.margins.end());
    for (auto& v : part.violations) add_violation(r, std::move(v));
  }
  std::sort(margins.begin(), margins.end());
  r.vacuous = margins.empty();
  r.details["components"] = margins.size();
  if (!margins.empty()) {
    r.details["margin"] = Json{{"min", margins.front()},
                               {"median", margins[margins.size() / 2]},
                               {"max", margins.back()}};
  }
  return r;
}

// --- triangles -------------------------------------------------------------

Coord central_threshold(Coord s, Coord eps0, Coord e) { return std::max(s * (3 * eps0 + 2), e); }

std::optional<LargeCentralComponent> find_large_central_component(Automorphism const& phi,
                                                                  Triangle const& t,
                                                                  Coord threshold) {
  auto const& m = phi.metrics();
  std::array<std::vector<Component>, 3> large;
  for (std::size_t i = 0; i < 3; ++i) {
    for (auto const& c : components(m, t.sides[i])) {
      if (component_x_length(m, c) > threshold) large[i].push_back(c);
    }
    if (large[i].empty()) return std::nullopt;
  }
  auto const& s = phi.spec();
  for (auto const& a : large[0]) {
    for (auto const& b : large[1]) {
      if (!are_connected(s, a, b)) continue;
      for (auto const& c : large[2]) {
        if (are_connected(s, a, c) && are_connected(s, b, c)) {
          return LargeCentralComponent{{a, b, c}, threshold};
        }
      }
    }
  }
  return std::nullopt;
}

ProbeReport hren_check(Automorphism const& phi, std::vector<Triangle> const& triangles, Coord e,
                       Coord threshold) {
  struct Part {
    bool found = false;
    std::vector<std::string> violations;
  };
  auto parts = parallel_map<Part>(triangles.size(), [&](std::size_t i) {
    auto const& t = triangles[i];
    Part out;
    auto lcc = find_large_central_component(phi, t, threshold);
    if (!lcc) return out;
    out.found = true;
    for (std::size_t k = 0; k < 3; ++k) {
      auto image = image_path(phi, t.sides[k]);
      if (!connected_to_companion(phi, t.sides[k], image, lcc->sides[k])) {
        out.violations.push_back("side " + std::to_string(k) + " of the central component of " +
                                 triangle_text(phi.spec(), t) +
                                 " is not connected to its companion");
      }
    }
    return out;
  });
  ProbeReport r;
  r.check = "hren";
  r.params = Json{{"E", e}, {"T", threshold}};
  r.samples = triangles.size();
  std::uint64_t found = 0;
  for (auto& part : parts) {
    found += part.found;
    for (auto& v : part.violations) add_violation(r, std::move(v));
  }
  r.details["triangles"] = triangles.size();
  r.details["lcc_found"] = found;
  r.vacuous = found == 0;
  return r;
}

ProbeReport proj_eta_probe(Automorphism const& phi, std::vector<Triangle> const& triangles,
                           Coord e, Coord threshold) {
  auto const& m = phi.metrics();
  // -1 marks a skipped triangle.
  auto parts = parallel_map<Coord>(triangles.size(), [&](std::size_t i) -> Coord {
    auto const& t = triangles[i];
    if (find_large_central_component(phi, t, threshold)) return -1;
    auto pr = project(m, t.z, t.sides[0]);
    auto line = vertices(m, t.sides[0]);
    auto xz = vertices(m, t.sides[2]);
    auto yz = vertices(m, t.sides[1]);
    Coord best = std::numeric_limits<Coord>::max();
    for (std::size_t idx : pr.indices) {
      auto const& u = line[idx];
      best = std::min(best, std::max(x_distance_to_set(m, u, xz), x_distance_to_set(m, u, yz)));
    }
    return best;
  });
  ProbeReport r;
  r.check = "proj_eta";
  r.params = Json{{"E", e}, {"T", threshold}};
  std::uint64_t used = 0;
  Coord eta = 0;
  for (Coord v : parts) {
    if (v < 0) continue;
    ++used;
    eta = std::max(eta, v);
  }
  r.samples = used;
  r.estimates["eta"] = eta;
  r.vacuous = used == 0;
  r.details["skipped_with_lcc"] = triangles.size() - used;
  return r;
}

// --- proximity to Fix ------------------------------------------------------

ProbeReport fixed_proximity_probe(Automorphism const& phi, DomainWindow const& window,
                                  Coord theta) {
  auto const& m = phi.metrics();
  auto fixed = enumerate_fixed(phi, window);
  auto domain = enumerate_domain(phi.base_spec(), window);
  auto parts = parallel_map<Coord>(domain.size(), [&](std::size_t i) -> Coord {
    auto const& y = domain[i];
    if (m.x_distance(y, phi.apply(y)) > theta) return -1;
    return x_distance_to_set(m, y, fixed.elements);
  });
  ProbeReport r;
  r.check = "mu";
  r.params = Json{{"theta", theta}, {"window", window_json(window)}};
  Coord mu = 0;
  std::uint64_t qualifying = 0;
  for (Coord v : parts) {
    if (v < 0) continue;
    ++qualifying;
    mu = std::max(mu, v);
  }
  r.samples = domain.size();
  r.estimates["mu"] = mu;
  r.details["qualifying"] = qualifying;
  r.details["fixed"] = fixed.elements.size();
  r.vacuous = qualifying == 0;
  return r;
}

ProbeReport companion_proximity_check(Automorphism const& phi, DomainWindow const& window,
                                      FixlabOptions const& options) {
  auto const& m = phi.metrics();
  auto fixed = enumerate_fixed(phi, window);
  auto geodesics = fixed_pair_geodesics(phi, fixed, options);
  struct Part {
    Coord mu = 0;
    std::uint64_t hits = 0;
  };
  auto parts = parallel_map<Part>(geodesics.size(), [&](std::size_t i) {
    auto const& p = geodesics[i];
    Part out;
    std::optional<ImagePath> image;
    for (auto const& c : components(m, p)) {
      if (!image) image = image_path(phi, p);
      if (!connected_to_companion(phi, p, *image, c)) continue;
      ++out.hits;
      out.mu = std::max({out.mu, x_distance_to_set(m, c.entry, fixed.elements),
                         x_distance_to_set(m, c.exit, fixed.elements)});
    }
    return out;
  });
  ProbeReport r;
  r.check = "companion_proximity";
  r.params = Json{{"window", window_json(window)}};
  r.samples = geodesics.size();
  Coord mu = 0;
  std::uint64_t hits = 0;
  for (auto const& part : parts) {
    mu = std::max(mu, part.mu);
    hits += part.hits;
  }
  r.estimates["mu_prime"] = mu;
  r.details["components"] = hits;
  r.vacuous = hits == 0;
  if (!geodesics.empty()) {
    // The proof's route: endpoints move by at most eps + 1 under phi.
    Coord eps = epsilon_images(phi, geodesics);
    auto mu_theta = fixed_proximity_probe(phi, window, eps + 1);
    r.details["theta"] = eps + 1;
    r.details["mu_at_theta"] = mu_theta.estimates["mu"];
  }
  return r;
}

ProbeReport fine_midpoint_probe(Automorphism const& phi, DomainWindow const& window, Coord e,
                                Coord r_param, FixlabOptions const& options) {
  auto const& m = phi.metrics();
  auto fixed = enumerate_fixed(phi, window);
  auto geodesics = fixed_pair_geodesics(phi, fixed, options);
  struct Part {
    bool fine = false;
    bool admissible = false;
    Coord value = 0;
    std::size_t length = 0;
  };
  auto parts = parallel_map<Part>(geodesics.size(), [&](std::size_t i) {
    auto const& p = geodesics[i];
    Part out;
    out.length = p.length();
    if (!is_e_fine(phi, p, e)) return out;
    out.fine = true;
    auto verts = vertices(m, p);
    Coord best = std::numeric_limits<Coord>::max();
    auto len = static_cast<Coord>(p.length());
    for (Coord v = r_param; v <= len - r_param; ++v) {
      best = std::min(best, x_distance_to_set(m, verts[static_cast<std::size_t>(v)],
                                              fixed.elements));
    }
    if (best != std::numeric_limits<Coord>::max()) {
      out.admissible = true;
      out.value = best;
    }
    return out;
  });
  ProbeReport r;
  r.check = "xi";
  r.params = Json{{"E", e}, {"R", r_param}, {"window", window_json(window)}};
  r.samples = geodesics.size();
  Coord xi = 0;
  Coord zeta = 0;
  std::uint64_t fine = 0;
  std::uint64_t admissible = 0;
  std::map<std::size_t, Coord> by_length;
  for (auto const& part : parts) {
    if (!part.fine) continue;
    ++fine;
    if (!part.admissible) {
      zeta = std::max(zeta, static_cast<Coord>(part.length) + 1);
      continue;
    }
    ++admissible;
    xi = std::max(xi, part.value);
    auto& slot = by_length[part.length];
    slot = std::max(slot, part.value);
  }
  r.estimates["xi"] = xi;
  r.estimates["zeta"] = zeta;
  r.vacuous = admissible == 0;
  r.details["fine_geodesics"] = fine;
  r.details["admissible"] = admissible;
  Json ladder = Json::array();
  for (auto const& [len, v] : by_length) ladder.push_back(Json{{"length", len}, {"xi", v}});
  r.details["xi_by_length"] = ladder;
  return r;
}

ProbeReport e_fine_stability_check(Automorphism const& phi, DomainWindow const& window,
                                   Coord e0, Coord mu, FixlabOptions const& options) {
  auto const& m = phi.metrics();
  auto const& s = phi.spec();
  auto fixed = enumerate_fixed(phi, window);
  std::vector<Path> fine;
  for (auto& p : fixed_pair_geodesics(phi, fixed, options)) {
    if (is_e_fine(phi, p, e0)) fine.push_back(std::move(p));
  }
  // X-ball of radius mu around 1.
  std::vector<NormalForm> ball{s.identity()};
  for (std::size_t lo = 0, r = 0; r < static_cast<std::size_t>(mu); ++r) {
    std::size_t hi = ball.size();
    for (std::size_t i = lo; i < hi; ++i) {
      for (auto const& x : m.x_alphabet()) {
        auto g = s.multiply(ball[i], m.letter_element(x));
        if (std::find(ball.begin(), ball.end(), g) == ball.end()) ball.push_back(std::move(g));
      }
    }
    lo = hi;
  }
  std::vector<PathPair> pairs;
  for (auto const& p : fine) {
    NormalForm end = terminus(m, p);
    for (auto const& b1 : ball) {
      for (auto const& b2 : ball) {
        pairs.push_back({p, canonical_geodesic(m, s.multiply(p.base, b1), s.multiply(end, b2))});
      }
    }
  }
  Coord eps = bcp_probe(m, pairs, 1, 0, mu).estimates.at("epsilon");
  Coord e = e0 + 2 * eps;
  auto bad = parallel_map<char>(pairs.size(), [&](std::size_t i) {
    return static_cast<char>(!is_e_fine(phi, pairs[i].q, e));
  });
  ProbeReport r;
  r.check = "e_fine_stability";
  r.params = Json{{"E0", e0}, {"mu", mu}, {"window", window_json(window)}};
  r.samples = pairs.size();
  r.estimates["epsilon"] = eps;
  r.estimates["E"] = e;
  r.vacuous = pairs.empty();
  r.details["fine_geodesics"] = fine.size();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!bad[i]) continue;
    add_violation(r, path_text(phi, pairs[i].q) + " is not " + std::to_string(e) +
                         "-fine although " + path_text(phi, pairs[i].p) + " is " +
                         std::to_string(e0) + "-fine");
  }
  return r;
}

// --- generation and peripheral structure ----------------------------------

namespace {

// Window-bounded closure of 1 under multiplication by gens on either side.
std::size_t closure_size(GroupSpec const& s, std::vector<NormalForm> const& gens,
                         DomainWindow const& window) {
  FixedSet seen{s.identity()};
  std::vector<NormalForm> queue{s.identity()};
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (auto const& g : gens) {
      for (auto const& c : {s.multiply(queue[i], g), s.multiply(g, queue[i])}) {
        if (!s.in_window(c, window)) continue;
        if (seen.insert(c).second) queue.push_back(c);
      }
    }
  }
  return seen.size();
}

}  // namespace

ProbeReport bounded_generation_check(Automorphism const& phi, DomainWindow const& window,
                                     Coord p) {
  auto const& m = phi.metrics();
  auto const& s = phi.base_spec();
  auto fixed = enumerate_fixed(phi, window);
  auto lengths = parallel_map<Coord>(fixed.elements.size(), [&](std::size_t i) {
    return m.rel_length(fixed.elements[i]);
  });
  Coord top = 0;
  for (Coord l : lengths) top = std::max(top, l);
  if (p < 0) p = top;
  auto generators = [&](Coord bound) {
    std::vector<NormalForm> out;
    for (std::size_t i = 0; i < fixed.elements.size(); ++i) {
      if (lengths[i] >= 1 && lengths[i] <= bound) {
        out.push_back(fixed.elements[i]);
        out.push_back(s.invert(fixed.elements[i]));
      }
    }
    return out;
  };
  auto covers = [&](Coord bound) {
    // The closure never leaves Fix, so equal sizes mean equal sets.
    return closure_size(s, generators(bound), window) == fixed.elements.size();
  };
  ProbeReport r;
  r.check = "bgen";
  r.params = Json{{"P", p}, {"window", window_json(window)}};
  r.samples = fixed.elements.size();
  r.details["fixed"] = fixed.elements.size();
  r.details["max_rel_length"] = top;
  if (!covers(p)) {
    add_violation(r, "short fixed elements with |g| <= " + std::to_string(p) +
                         " do not generate the windowed fixed sample");
    return r;
  }
  Coord lo = 0;
  Coord hi = p;
  while (lo < hi) {
    Coord mid = lo + (hi - lo) / 2;
    if (covers(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  r.estimates["P"] = lo;
  r.details["generators"] = generators(lo).size() / 2;
  return r;
}

InducedPeripherals induced_peripherals(Automorphism const& phi, DomainWindow const& window,
                                       std::size_t threshold) {
  auto const& s = phi.base_spec();
  if (threshold == 0) threshold = 2 * window.max_syllables;
  auto fixed = enumerate_fixed(phi, window);
  FixedSet fixed_set = as_set(fixed);
  std::size_t reps_syllables = window.max_syllables == 0 ? 0 : (window.max_syllables - 1) / 2;
  auto reps = enumerate_domain(s, {reps_syllables, window.max_factor_length});

  InducedPeripherals out;
  ProbeReport& r = out.report;
  r.check = "induced";
  r.params = Json{{"window", window_json(window)}, {"threshold", threshold}};
  r.details["fixed"] = fixed.elements.size();

  std::uint64_t scanned = 0;
  std::vector<InducedClass> candidates;
  for (FactorId f : s.peripheral_factors()) {
    auto syllables = factor_syllables(s, f, window.max_factor_length);
    for (auto const& g : reps) {
      if (!g.is_identity() && g.front().factor == f) continue;
      ++scanned;
      InducedClass c;
      c.factor = f;
      c.conjugator = g;
      c.windowed_peripheral = syllables.size();
      c.growth.assign(static_cast<std::size_t>(window.max_factor_length), 0);
      NormalForm gi = s.invert(g);
      for (auto const& h : syllables) {
        NormalForm x = s.multiply(s.multiply(gi, NormalForm({h})), g);
        NormalForm image = phi.apply(x);
        if (!in_peripheral(s, s.multiply(s.multiply(g, image), gi), f)) c.invariant = false;
        bool in_sample = fixed_set.count(x) > 0;
        if (in_sample != (image == x)) {
          add_violation(r, "fixed sample disagrees with phi on " + s.format(x));
        }
        if (!in_sample) continue;
        c.intersection.push_back(x);
        for (Coord k = s.syllable_norm(h); k <= window.max_factor_length; ++k) {
          ++c.growth[static_cast<std::size_t>(k - 1)];
        }
      }
      if (c.intersection.size() >= threshold) candidates.push_back(std::move(c));
    }
  }
  // g ~ g' when g f g'^-1 lies in H for some windowed fixed f.
  for (auto& c : candidates) {
    bool merged = false;
    for (auto const& rep : out.classes) {
      if (rep.factor != c.factor) continue;
      NormalForm gi = s.invert(c.conjugator);
      for (auto const& f : fixed.elements) {
        if (in_peripheral(s, s.multiply(s.multiply(rep.conjugator, f), gi), c.factor)) {
          merged = true;
          break;
        }
      }
      if (merged) break;
    }
    if (merged) continue;
    if (!c.invariant) {
      add_violation(r, "conjugate by " + s.format(c.conjugator) + " of " +
                           s.factor(c.factor).name + " meets Fix in " +
                           std::to_string(c.intersection.size()) +
                           " elements but is not phi-invariant");
    }
    out.classes.push_back(std::move(c));
  }
  r.samples = scanned;
  r.estimates["classes"] = static_cast<std::int64_t>(out.classes.size());
  Json classes = Json::array();
  for (auto const& c : out.classes) {
    classes.push_back(Json{{"factor", s.factor(c.factor).name},
                           {"conjugator", s.format(c.conjugator)},
                           {"intersection", c.intersection.size()},
                           {"windowed_peripheral", c.windowed_peripheral},
                           {"full", c.full()},
                           {"invariant", c.invariant},
                           {"growth", c.growth}});
  }
  r.details["classes"] = classes;
  r.details["candidates"] = candidates.size();
  return out;
}

ProbeReport peripheral_intersection_check(GroupSpec const& s, DomainWindow const& window) {
  auto domain = enumerate_domain(s, window);
  auto peripherals = s.peripheral_factors();
  struct Part {
    std::uint64_t checked = 0;
    std::vector<std::string> violations;
  };
  std::vector<std::vector<Syllable>> syllables(s.factor_count());
  for (FactorId f : peripherals) syllables[f] = factor_syllables(s, f, window.max_factor_length);
  auto parts = parallel_map<Part>(domain.size(), [&](std::size_t i) {
    Part out;
    auto const& g = domain[i];
    NormalForm gi = s.invert(g);
    for (FactorId lambda : peripherals) {
      for (FactorId mu : peripherals) {
        if (lambda == mu && in_peripheral(s, g, lambda)) continue;
        ++out.checked;
        for (auto const& h : syllables[lambda]) {
          NormalForm c = s.multiply(s.multiply(g, NormalForm({h})), gi);
          if (in_peripheral(s, c, mu)) {
            out.violations.push_back(s.factor(lambda).name + " meets the conjugate of " +
                                     s.factor(mu).name + " by " + s.format(g) + " in " +
                                     s.format_syllable(h));
            break;
          }
        }
      }
    }
    return out;
  });
  ProbeReport r;
  r.check = "maln";
  r.params = Json{{"window", window_json(window)}};
  std::uint64_t checked = 0;
  for (auto& part : parts) {
    checked += part.checked;
    for (auto& v : part.violations) add_violation(r, std::move(v));
  }
  r.samples = checked;
  r.vacuous = checked == 0;
  r.details["conjugators"] = domain.size();
  r.details["window"] = window_text(window);
  return r;
}

}  // namespace relfix
