#include "relfix/suites.hpp"

#include <functional>
#include <map>
#include <optional>

#include "relfix/parallel.hpp"

namespace relfix {

namespace {

Json window_json(DomainWindow const& w) {
  return Json{{"syl", w.max_syllables}, {"coord", w.max_factor_length}};
}

void add_violation(ProbeReport& r, std::string message) {
  std::uint64_t n = r.details.value("violation_count", std::uint64_t{0}) + 1;
  r.details["violation_count"] = n;
  if (r.violations.size() < 100) r.violations.push_back(std::move(message));
}

// Lazily shared between the suites of one run.
struct Context {
  Automorphism const& phi;
  SuiteConfig const& config;
  std::optional<FixedSample> fixed_;
  std::optional<std::vector<Path>> geodesics_;
  std::uint64_t truncated = 0;
  std::optional<Coord> eps0_;
  std::optional<std::vector<NormalForm>> domain_;

  Metrics const& m() const { return phi.metrics(); }

  FixedSample const& fixed() {
    if (!fixed_) fixed_ = enumerate_fixed(phi, config.window);
    return *fixed_;
  }
  std::vector<Path> const& geodesics() {
    if (!geodesics_) geodesics_ = fixed_pair_geodesics(phi, fixed(), options(), &truncated);
    return *geodesics_;
  }
  FixlabOptions options() const {
    FixlabOptions o = config.fix;
    o.seed = config.seed;
    return o;
  }
  std::vector<NormalForm> const& domain() {
    if (!domain_) domain_ = enumerate_domain(phi.base_spec(), config.window);
    return *domain_;
  }
  Rational a() const { return quasigeodesic_constant_A(1, 0, phi.S()); }

  // bcp at (A, A, 0) on fixed-endpoint geodesics and their images.
  ProbeReport bcp_images() {
    std::vector<PathPair> pairs;
    for (auto const& p : geodesics()) pairs.push_back({p, image_path(phi, p).path});
    auto r = bcp_probe(m(), pairs, a(), a(), 0);
    r.check = "bcp";
    r.seed = config.seed;
    r.details["window"] = window_json(config.window);
    r.details["fixed"] = fixed().elements.size();
    r.details["truncated_pairs"] = truncated;
    eps0_ = r.estimates.at("epsilon");
    return r;
  }
  Coord eps0() {
    if (!eps0_) bcp_images();
    return *eps0_;
  }
};

std::vector<ProbeReport> suite_xlength(Context& ctx) {
  auto const& phi = ctx.phi;
  auto const& m = ctx.m();
  auto const& s = phi.base_spec();
  auto const& domain = ctx.domain();
  Coord S = phi.S();
  auto peripherals = s.peripheral_factors();
  std::vector<std::vector<Syllable>> labels(s.factor_count());
  std::vector<std::vector<Syllable>> units(s.factor_count());
  for (FactorId f : peripherals) {
    labels[f] = factor_syllables(s, f, ctx.config.window.max_factor_length);
    units[f] = factor_syllables(s, f, 1);
  }
  auto edge = [](NormalForm const& base, Syllable const& h) {
    return Path{base, {EdgeLabel::peripheral(h.factor, h.coords)}};
  };
  auto companion_of = [&](Path const& e) {
    auto image = image_path(phi, e);
    return companion_component(phi, e, image, components(m, e)[0]);
  };

  // Companion lengths against the source edge.
  struct Lengths {
    std::uint64_t edges = 0;
    std::vector<std::string> violations;
  };
  auto lengths = parallel_map<Lengths>(domain.size(), [&](std::size_t i) {
    Lengths out;
    for (FactorId f : peripherals) {
      for (auto const& h : labels[f]) {
        Path e = edge(domain[i], h);
        Coord le = component_x_length(m, components(m, e)[0]);
        Coord lc = component_x_length(m, companion_of(e));
        ++out.edges;
        if (lc > S * le + 2 || le > S * (lc + 2)) {
          out.violations.push_back("l_X(e)=" + std::to_string(le) + ", l_X(e_phi)=" +
                                   std::to_string(lc) + " for " + format_path(phi.spec(), e));
        }
      }
    }
    return out;
  });
  ProbeReport r1;
  r1.check = "xlength_bounds";
  r1.params = Json{{"S", S}, {"window", window_json(ctx.config.window)}};
  for (auto& part : lengths) {
    r1.samples += part.edges;
    for (auto& v : part.violations) add_violation(r1, std::move(v));
  }
  r1.vacuous = r1.samples == 0;

  // Connectedness of edges at 1 and at g, before and after phi.
  std::vector<std::pair<Path, Component>> at_one;
  for (FactorId f : peripherals) {
    for (auto const& h : units[f]) {
      Path e = edge(s.identity(), h);
      at_one.emplace_back(e, companion_of(e));
    }
  }
  struct Conn {
    std::uint64_t pairs = 0;
    std::uint64_t connected = 0;
    std::vector<std::string> violations;
  };
  auto conn = parallel_map<Conn>(domain.size(), [&](std::size_t i) {
    Conn out;
    for (FactorId f : peripherals) {
      for (auto const& h : units[f]) {
        Path e2 = edge(domain[i], h);
        Component c2 = components(m, e2)[0];
        Component k2 = companion_of(e2);
        for (auto const& [e1, k1] : at_one) {
          Component c1 = components(m, e1)[0];
          bool before = are_connected(phi.spec(), c1, c2);
          bool after = are_connected(phi.spec(), k1, k2);
          ++out.pairs;
          out.connected += before;
          if (before != after) {
            out.violations.push_back(format_path(phi.spec(), e1) + " and " +
                                     format_path(phi.spec(), e2) +
                                     (before ? " are" : " are not") +
                                     " connected but their companions" +
                                     (after ? " are" : " are not"));
          }
        }
      }
    }
    return out;
  });
  ProbeReport r2;
  r2.check = "connectedness";
  r2.params = Json{{"window", window_json(ctx.config.window)}};
  std::uint64_t connected = 0;
  for (auto& part : conn) {
    r2.samples += part.pairs;
    connected += part.connected;
    for (auto& v : part.violations) add_violation(r2, std::move(v));
  }
  r2.details["connected_pairs"] = connected;
  r2.vacuous = r2.samples == 0;
  return {r1, r2};
}

std::vector<ProbeReport> suite_qgimage(Context& ctx) {
  auto const& phi = ctx.phi;
  auto const& m = ctx.m();
  auto const& domain = ctx.domain();
  Rational a = ctx.a();
  std::size_t cap = ctx.config.fix.label_cap;
  struct Part {
    std::uint64_t paths = 0;
    bool truncated = false;
    std::vector<std::string> violations;
  };
  auto parts = parallel_map<Part>(domain.size(), [&](std::size_t i) {
    Part out;
    std::vector<Path> paths;
    try {
      paths = geodesic_labelings(m, phi.base_spec().identity(), domain[i], cap);
    } catch (CapExceeded const&) {
      out.truncated = true;
      paths = {canonical_geodesic(m, phi.base_spec().identity(), domain[i])};
    }
    for (auto const& p : paths) {
      ++out.paths;
      auto image = image_path(phi, p);
      std::string where = " for " + format_path(phi.spec(), p);
      if (!image.path.base.is_identity() || terminus(m, image.path) != phi.apply(domain[i])) {
        out.violations.push_back("image endpoints" + where);
      }
      if (!is_without_backtracking(m, image.path)) out.violations.push_back("backtracking" + where);
      for (auto const& c : components(m, image.path)) {
        if (c.edge_count() != 1) {
          out.violations.push_back("multi-edge component" + where);
          break;
        }
      }
      if (!is_quasigeodesic(m, image.path, a, a)) {
        out.violations.push_back("image not (A,A)-quasigeodesic" + where);
      }
    }
    return out;
  });
  ProbeReport r;
  r.check = "qgimage";
  r.params = Json{{"A", a.numerator()}, {"window", window_json(ctx.config.window)},
                  {"label_cap", cap}};
  std::uint64_t truncated = 0;
  for (auto& part : parts) {
    r.samples += part.paths;
    truncated += part.truncated;
    for (auto& v : part.violations) add_violation(r, std::move(v));
  }
  r.details["elements"] = domain.size();
  r.details["truncated_elements"] = truncated;
  r.vacuous = r.samples == 0;
  return {r};
}

std::vector<ProbeReport> suite_bcp(Context& ctx) {
  auto images = ctx.bcp_images();
  auto labeling_pairs =
      sample_labeling_pairs(ctx.m(), ctx.config.window, ctx.config.samples, ctx.config.seed);
  auto labelings = bcp_probe(ctx.m(), labeling_pairs, 1, 0, 0);
  labelings.check = "bcp_labelings";
  labelings.seed = ctx.config.seed;
  auto stability = e_fine_stability_check(ctx.phi, ctx.config.window, ctx.config.stability_e0,
                                          ctx.config.stability_mu, ctx.options());
  return {images, labelings, stability};
}

std::vector<ProbeReport> suite_cascades(Context& ctx) {
  Coord e = ctx.config.cascades_e;
  Coord eps = ctx.eps0();
  std::vector<Path> fine;
  for (auto const& p : ctx.geodesics()) {
    if (is_e_fine(ctx.phi, p, e)) fine.push_back(p);
  }
  auto r = cascades_check(ctx.phi, fine, e, eps);
  if (!r.ok()) {
    r.details["violations_with_doubled_estimates"] =
        cascades_check(ctx.phi, fine, e, 2 * eps).details.value("violation_count", 0);
  }
  r.details["geodesics"] = ctx.geodesics().size();
  auto prox = companion_proximity_check(ctx.phi, ctx.config.window, ctx.options());
  return {r, prox};
}

std::vector<ProbeReport> suite_hren(Context& ctx) {
  Coord e = ctx.config.fine_e;
  Coord eps = ctx.eps0();
  Coord t = central_threshold(ctx.phi.S(), eps, e);
  auto triangles = fixed_triangles(ctx.phi, ctx.fixed(), ctx.options());
  auto r = hren_check(ctx.phi, triangles, e, t);
  r.params["epsilon0"] = eps;
  if (!r.ok()) {
    Coord doubled = central_threshold(ctx.phi.S(), 2 * eps, e);
    r.details["violations_with_doubled_estimates"] =
        hren_check(ctx.phi, triangles, e, doubled).details.value("violation_count", 0);
  }
  auto eta = proj_eta_probe(ctx.phi, triangles, e, t);
  return {r, eta};
}

std::vector<ProbeReport> suite_proj(Context& ctx) {
  auto const& phi = ctx.phi;
  auto const& m = ctx.m();
  auto const& s = phi.base_spec();
  auto const& domain = ctx.domain();
  auto line_points = enumerate_domain(s, ctx.config.line_window);
  std::vector<Path> lines;
  for (auto const& y : line_points) {
    if (!y.is_identity()) lines.push_back(canonical_geodesic(m, s.identity(), y));
  }
  struct Part {
    std::uint64_t projections = 0;
    std::vector<std::string> violations;
  };
  auto parts = parallel_map<Part>(domain.size(), [&](std::size_t i) {
    Part out;
    for (auto const& line : lines) {
      auto pr = project(m, domain[i], line);
      out.projections += pr.indices.size();
      for (auto& v : pr.violations) out.violations.push_back(std::move(v));
    }
    return out;
  });
  ProbeReport r1;
  r1.check = "project_qg";
  r1.params = Json{{"window", window_json(ctx.config.window)},
                   {"line_window", window_json(ctx.config.line_window)}};
  std::uint64_t projections = 0;
  for (auto& part : parts) {
    projections += part.projections;
    for (auto& v : part.violations) add_violation(r1, std::move(v));
  }
  r1.samples = domain.size() * lines.size();
  r1.details["lines"] = lines.size();
  r1.details["projection_points"] = projections;
  r1.vacuous = r1.samples == 0;

  // Triangles (1, y, z) over the line window.
  std::vector<std::pair<std::size_t, std::size_t>> corners;
  for (std::size_t i = 0; i < line_points.size(); ++i) {
    for (std::size_t j = 0; j < line_points.size(); ++j) corners.emplace_back(i, j);
  }
  ProbeReport r2;
  r2.check = "four_k";
  r2.params = Json{{"K", ctx.config.k_values}, {"line_window", window_json(ctx.config.line_window)}};
  r2.details["per_K"] = Json::array();
  for (Coord k : ctx.config.k_values) {
    auto scans = parallel_map<FourKScan>(corners.size(), [&](std::size_t c) {
      auto t = geodesic_triangle(m, s.identity(), line_points[corners[c].first],
                                 line_points[corners[c].second]);
      return four_k_scan(m, t, k);
    });
    std::uint64_t points = 0;
    std::uint64_t pairs = 0;
    for (auto& scan : scans) {
      points += scan.qualifying_points;
      pairs += scan.pairs;
      for (auto& v : scan.violations) add_violation(r2, std::move(v));
    }
    r2.samples += corners.size();
    r2.details["per_K"].push_back(Json{{"K", k}, {"qualifying_points", points}, {"pairs", pairs}});
  }
  r2.vacuous = r2.samples == 0;
  return {r1, r2};
}

std::vector<ProbeReport> suite_maln(Context& ctx) {
  return {peripheral_intersection_check(ctx.phi.base_spec(), ctx.config.window)};
}

std::vector<ProbeReport> suite_bgen(Context& ctx) {
  return {bounded_generation_check(ctx.phi, ctx.config.window, ctx.config.bgen_p)};
}

using SuiteFn = std::vector<ProbeReport> (*)(Context&);

std::vector<std::pair<std::string, SuiteFn>> const& registry() {
  static std::vector<std::pair<std::string, SuiteFn>> const suites = {
      {"xlength", suite_xlength}, {"qgimage", suite_qgimage}, {"cascades", suite_cascades},
      {"hren", suite_hren},       {"proj", suite_proj},       {"bcp", suite_bcp},
      {"maln", suite_maln},       {"bgen", suite_bgen},
  };
  return suites;
}

}  // namespace

std::vector<std::string> const& suite_names() {
  static std::vector<std::string> const names = [] {
    std::vector<std::string> out;
    for (auto const& [name, _] : registry()) out.push_back(name);
    out.push_back("all");
    return out;
  }();
  return names;
}

std::vector<ProbeReport> run_suite(std::string_view name, Automorphism const& phi,
                                   SuiteConfig const& config) {
  Context ctx{phi, config, {}, {}, 0, {}, {}};
  std::vector<ProbeReport> out;
  bool found = false;
  for (auto const& [suite, fn] : registry()) {
    if (name != "all" && name != suite) continue;
    found = true;
    for (auto& r : fn(ctx)) {
      if (r.seed == 0) r.seed = config.seed;
      r.details["suite"] = suite;
      out.push_back(std::move(r));
    }
  }
  if (!found && name != "all") throw ValidationError("unknown suite '" + std::string(name) + "'");
  return out;
}

ProbeReport image_bcp(Automorphism const& phi, SuiteConfig const& config) {
  Context ctx{phi, config, {}, {}, 0, {}, {}};
  return ctx.bcp_images();
}

}  // namespace relfix
