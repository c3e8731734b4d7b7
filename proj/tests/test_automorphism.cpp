#include <gtest/gtest.h>

#include "instances.hpp"
#include "relfix/automorphism.hpp"

using namespace relfix;
using fixture::nf;

namespace {

GroupSpec const& G1() { return fixture::g1().spec; }
GroupSpec const& G2() { return fixture::g2().spec; }

Automorphism aut(relfix::GroupFile const& file, std::string const& name) {
  return Automorphism::from_definition(file.spec, *file.find(name));
}

EdgeLabel H(FactorId f, Coords c) { return EdgeLabel::peripheral(f, c); }

struct Instance {
  Automorphism phi;
  // Relative searches over an extended X are exponential; keep those short.
  DomainWindow window;
  int samples;
  // Image paths are long enough that their relative subpath searches blow the cap.
  bool deep = false;
};

std::vector<Instance> all_instances() {
  std::vector<Instance> out;
  for (auto const* file : {&fixture::g1(), &fixture::g2()}) {
    for (auto const& def : file->automorphisms) out.push_back({aut(*file, def.name), {3, 2}, 1000});
  }
  out.push_back({Automorphism::inner(G1(), nf(G1(), "t a t")), {1, 1}, 50});
  out.push_back({Automorphism::inner(G2(), nf(G2(), "c a^-1 b d^2")), {1, 1}, 50, true});
  return out;
}

}  // namespace

TEST(ParseAutomorphism, SwapOnG1) {
  auto phi = aut(fixture::g1(), "phi1");
  auto const& image = phi.peripheral_map(0);
  ASSERT_TRUE(image.has_value());
  EXPECT_EQ(image->target, 0u);
  EXPECT_TRUE(image->conjugator.is_identity());
  EXPECT_FALSE(phi.peripheral_map(1).has_value());
  EXPECT_EQ(phi.S(), 1);
  EXPECT_TRUE(phi.spec().extra_x_elements().empty());
}

TEST(ParseAutomorphism, InnerByT) {
  auto phi = aut(fixture::g1(), "phi3");
  EXPECT_EQ(phi.peripheral_map(0)->conjugator, nf(G1(), "t^-1"));
  EXPECT_TRUE(phi.spec().extra_x_elements().empty());
  auto built = Automorphism::inner(G1(), nf(G1(), "t"));
  EXPECT_EQ(built.peripheral_map(0)->conjugator, nf(G1(), "t^-1"));
}

TEST(ParseAutomorphism, Rejections) {
  auto const& s = G1();
  EXPECT_THROW(parse_automorphism("aut bad { a -> t; b -> b; t -> t; inverse { a -> t; b -> b; t -> t } }", s),
               ValidationError);
  EXPECT_THROW(parse_automorphism("aut bad { a -> b; b -> a; t -> t; inverse { a -> a; b -> b; t -> t } }", s),
               ValidationError);
  EXPECT_THROW(parse_automorphism("aut bad { a -> a^2; b -> b; t -> t; inverse { a -> a; b -> b; t -> t } }", s),
               ValidationError);
  EXPECT_THROW(parse_automorphism("aut bad { a -> a; b -> b; inverse { a -> a; b -> b; t -> t } }", s),
               ParseError);
  auto torsion = parse_group_spec("factor A {abelian; gens a,b,c; torsion 3}");
  EXPECT_THROW(parse_automorphism(
                   "aut bad { a -> a; b -> b; c -> a; inverse { a -> a; b -> b; c -> c } }", torsion),
               ValidationError);
  EXPECT_NO_THROW(parse_automorphism(
      "aut ok { a -> a c; b -> b; c -> c^2; inverse { a -> a c; b -> b; c -> c^2 } }", torsion));
}

TEST(PeripheralCorrespondence, Examples) {
  auto swap = aut(fixture::g2(), "phi2");
  EXPECT_EQ(swap.peripheral_map(0)->target, 1u);
  EXPECT_EQ(swap.peripheral_map(1)->target, 0u);
  EXPECT_TRUE(swap.peripheral_map(0)->conjugator.is_identity());
  auto inner = aut(fixture::g2(), "inner_a");
  EXPECT_TRUE(inner.peripheral_map(0)->conjugator.is_identity());
  EXPECT_EQ(inner.peripheral_map(1)->conjugator, nf(G2(), "a^-1"));
  auto deep = Automorphism::inner(G1(), nf(G1(), "t a t b"));
  EXPECT_EQ(deep.peripheral_map(0)->conjugator, nf(G1(), "t^-1 a^-1 t^-1"));
  // Conjugators of phi and of phi^-1.
  ASSERT_EQ(deep.spec().extra_x_elements().size(), 2u);
  EXPECT_EQ(deep.inverse().spec(), deep.spec());
}

TEST(PeripheralCorrespondence, Failures) {
  auto const& s = G1();
  std::vector<NormalForm> id{nf(s, "a"), nf(s, "b"), nf(s, "t")};
  std::vector<NormalForm> split{nf(s, "a"), nf(s, "t b t^-1"), nf(s, "t")};
  EXPECT_THROW(peripheral_correspondence(s, split, id, 0), ValidationError);
  std::vector<NormalForm> free_image{nf(s, "t"), nf(s, "b"), nf(s, "t")};
  EXPECT_THROW(peripheral_correspondence(s, free_image, id, 0), ValidationError);
  // The inverse images decide whether phi(H_A) fills the conjugate.
  std::vector<NormalForm> leaks{nf(s, "t"), nf(s, "b"), nf(s, "a")};
  EXPECT_THROW(peripheral_correspondence(s, id, leaks, 0), ValidationError);
}

TEST(ApplyAut, Examples) {
  auto phi = aut(fixture::g1(), "phi1");
  auto const& s = G1();
  auto g = phi.apply(nf(s, "a^2 b"));
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g[0].coords, (Coords{1, 2}));
  EXPECT_EQ(phi.apply(nf(s, "t a t^-1")), nf(s, "t^-1 b t"));
}

TEST(ApplyAut, InverseAndHomomorphismLaws) {
  for (auto const& [phi, window, samples, deep] : all_instances()) {
    auto const& s = phi.base_spec();
    SplitMix rng(31);
    for (int i = 0; i < 10000; ++i) {
      auto g = random_element(s, {4, 3}, rng);
      auto h = random_element(s, {4, 3}, rng);
      ASSERT_EQ(phi.apply(phi.apply_inverse(g)), g);
      ASSERT_EQ(phi.apply_inverse(phi.apply(g)), g);
      ASSERT_EQ(phi.apply(s.multiply(g, h)), s.multiply(phi.apply(g), phi.apply(h)));
    }
  }
}

TEST(ComputeS, Examples) {
  EXPECT_EQ(compute_S(aut(fixture::g1(), "phi1")), 1);
  EXPECT_EQ(compute_S(aut(fixture::g1(), "id")), 1);
  EXPECT_EQ(compute_S(Automorphism::identity(G2())), 1);
  // t -> (ab) t (ab)^-1 spells as a b t b^-1 a^-1.
  EXPECT_EQ(compute_S(aut(fixture::g1(), "phi4")), 5);
  EXPECT_EQ(compute_S(aut(fixture::g1(), "phi3")), 3);
  EXPECT_EQ(compute_S(aut(fixture::g2(), "phi2")), 1);
}

TEST(ImagePath, Examples) {
  auto phi = aut(fixture::g1(), "phi1");
  Metrics const& m = phi.metrics();
  auto one = G1().identity();
  auto img = image_path(phi, Path{one, {H(0, {2, 3})}});
  EXPECT_EQ(img.path.labels, LabelWord{H(0, {3, 2})});
  EXPECT_EQ(img.companion_index[0], std::optional<std::size_t>(0));
  auto t = image_path(phi, Path{one, {EdgeLabel::generator(2, 1)}});
  EXPECT_EQ(t.path.labels, LabelWord{EdgeLabel::generator(2, -1)});
  EXPECT_FALSE(t.companion_index[0].has_value());
  auto fixed = Path{one, {H(0, {1, 1})}};
  EXPECT_EQ(image_path(phi, fixed).path.labels[companion(phi, fixed, 0)], H(0, {1, 1}));
  EXPECT_THROW(companion(phi, Path{one, {EdgeLabel::generator(2, 1)}}, 0), PreconditionError);
  EXPECT_EQ(terminus(m, img.path), nf(G1(), "a^3 b^2"));
}

TEST(ImagePath, InnerByTFramesCompanion) {
  auto phi = aut(fixture::g1(), "phi3");
  auto img = image_path(phi, Path{G1().identity(), {H(0, {1, 1})}});
  EXPECT_EQ(img.path.labels, (LabelWord{EdgeLabel::generator(2, 1), H(0, {1, 1}),
                                        EdgeLabel::generator(2, -1)}));
  EXPECT_EQ(img.companion_index[0], std::optional<std::size_t>(1));
}

TEST(ImagePath, GeodesicImagesAndEndpoints) {
  for (auto const& [phi, window, samples, deep] : all_instances()) {
    Metrics const& m = phi.metrics();
    auto const& s = phi.base_spec();
    auto inv = phi.inverse();
    SplitMix rng(2);
    for (int i = 0; i < samples; ++i) {
      auto p = canonical_geodesic(m, random_element(s, window, rng), random_element(s, window, rng));
      auto img = image_path(phi, p);
      ASSERT_EQ(img.path.base, phi.apply(p.base));
      ASSERT_EQ(terminus(m, img.path), phi.apply(terminus(m, p)));
      for (auto const& c : components(m, img.path)) ASSERT_EQ(c.edge_count(), 1u);
      ASSERT_TRUE(is_without_backtracking(m, img.path));
      auto back = image_path(inv, img.path);
      ASSERT_EQ(back.path.base, p.base);
      ASSERT_EQ(terminus(inv.metrics(), back.path), terminus(m, p));
    }
  }
}

TEST(ImagePath, CompanionLengthBounds) {
  for (auto const& [phi, window, samples, deep] : all_instances()) {
    Metrics const& m = phi.metrics();
    auto const& s = phi.base_spec();
    Coord S = phi.S();
    SplitMix rng(4);
    auto peripherals = s.peripheral_factors();
    for (int i = 0; i < 10000; ++i) {
      FactorId f = peripherals[rng.below(peripherals.size())];
      auto pool = factor_syllables(s, f, 4);
      Path e{random_element(s, {3, 2}, rng), {H(f, pool[rng.below(pool.size())].coords)}};
      auto img = image_path(phi, e);
      auto companion_edge = subpath(m, img.path, *img.companion_index[0], *img.companion_index[0] + 1);
      Coord le = component_x_length(m, components(m, e)[0]);
      Coord lc = component_x_length(m, components(m, companion_edge)[0]);
      ASSERT_LE(lc, S * le + 2);
      ASSERT_LE(le, S * (lc + 2));
    }
  }
}

TEST(ImagePath, ConnectednessTransfers) {
  for (auto const& [phi, window, samples, deep] : all_instances()) {
    Metrics const& m = phi.metrics();
    auto const& s = phi.base_spec();
    SplitMix rng(6);
    auto peripherals = s.peripheral_factors();
    std::size_t connected = 0;
    auto random_edge = [&](NormalForm const& base, FactorId f) {
      auto pool = factor_syllables(s, f, 2);
      return Path{base, {H(f, pool[rng.below(pool.size())].coords)}};
    };
    auto companion_component = [&](Path const& e) {
      auto img = image_path(phi, e);
      std::size_t c = *img.companion_index[0];
      return components(m, subpath(m, img.path, c, c + 1))[0];
    };
    for (int i = 0; i < 10000; ++i) {
      FactorId f = peripherals[rng.below(peripherals.size())];
      FactorId g = rng.below(4) == 0 ? peripherals[rng.below(peripherals.size())] : f;
      auto x = random_element(s, {2, 2}, rng);
      // Half of the pairs share a coset of H_f.
      auto y = rng.below(2) == 0 ? s.multiply(x, factor_syllables(s, f, 2).empty()
                                                     ? s.identity()
                                                     : NormalForm({factor_syllables(s, f, 2)[0]}))
                                 : random_element(s, {2, 2}, rng);
      auto e = random_edge(x, f);
      auto h = random_edge(y, g);
      bool before = are_connected(s, components(m, e)[0], components(m, h)[0]);
      bool after = are_connected(s, companion_component(e), companion_component(h));
      ASSERT_EQ(before, after);
      connected += before;
    }
    EXPECT_GT(connected, 0u);
  }
}

TEST(ImagePath, QuasigeodesicImages) {
  for (auto const& [phi, window, samples, deep] : all_instances()) {
    if (deep) continue;
    Metrics const& m = phi.metrics();
    Rational A = quasigeodesic_constant_A(1, 2, phi.S());
    for (auto const& pair : sample_quasigeodesic_pairs(m, window, samples / 5, 9)) {
      ASSERT_TRUE(is_quasigeodesic(m, pair.p, 1, 2));
      auto img = image_path(phi, pair.p);
      ASSERT_TRUE(is_quasigeodesic(m, img.path, A, A));
      bool single = true;
      for (auto const& c : components(m, pair.p)) single = single && c.edge_count() == 1;
      if (single) ASSERT_TRUE(is_without_backtracking(m, img.path));
    }
  }
}

TEST(QuasigeodesicConstant, Values) {
  EXPECT_EQ(quasigeodesic_constant_A(1, 0, 1), Rational(36));
  EXPECT_EQ(quasigeodesic_constant_A(1, 0, 2), Rational(90));
  EXPECT_EQ(quasigeodesic_constant_A(1, 2, 1), Rational(42));
  EXPECT_EQ(quasigeodesic_constant_A(1, 0, 5), Rational(5 * 11 * 12));
  EXPECT_GE(quasigeodesic_constant_A(1, 0, 1), Rational(2));
}

TEST(Peripheral, Bijection) {
  for (auto const& [phi, window, samples, deep] : all_instances()) {
    std::vector<bool> hit(phi.base_spec().factor_count(), false);
    for (FactorId f : phi.base_spec().peripheral_factors()) {
      auto t = phi.peripheral_map(f)->target;
      EXPECT_FALSE(hit[t]);
      hit[t] = true;
      EXPECT_TRUE(phi.base_spec().is_peripheral(t));
    }
  }
}
