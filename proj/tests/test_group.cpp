#include <gtest/gtest.h>

#include <set>
#include <unordered_set>

#include "instances.hpp"
#include "relfix/enumerate.hpp"
#include "relfix/metrics.hpp"

using namespace relfix;
using fixture::nf;

namespace {

GroupSpec const& G1() { return fixture::g1().spec; }
GroupSpec const& G2() { return fixture::g2().spec; }

Syllable syl(GroupSpec const& spec, std::string const& factor, Coords c) {
  return {*spec.find_factor(factor), std::move(c)};
}

oracle::Word random_oracle_word(GroupSpec const& spec, SplitMix& rng, std::size_t length) {
  oracle::Word w;
  for (std::size_t i = 0; i < length; ++i) {
    auto f = static_cast<FactorId>(rng.below(spec.factor_count()));
    std::vector<Coord> v(spec.factor(f).dimension());
    for (auto& c : v) c = rng.between(-2, 2);
    w.push_back({f, v});
  }
  return w;
}

constexpr DomainWindow kSampleWindow{4, 3};

}  // namespace

TEST(ParseGroupSpec, PeripheralAndFree) {
  auto spec = parse_group_spec("factor A {abelian; gens a,b} free t");
  ASSERT_EQ(spec.factor_count(), 2u);
  EXPECT_TRUE(spec.is_peripheral(0));
  EXPECT_FALSE(spec.is_peripheral(1));
  EXPECT_EQ(spec.free_generators(), std::vector<std::string>{"t"});
  EXPECT_EQ(spec.factor(0).rank, 2u);
}

TEST(ParseGroupSpec, RankOneFactorIsNotPeripheral) {
  auto spec = parse_group_spec("factor C {abelian; gens c} free t");
  EXPECT_FALSE(spec.is_peripheral(0));
  EXPECT_TRUE(spec.peripheral_factors().empty());
}

TEST(ParseGroupSpec, Rejections) {
  EXPECT_THROW(parse_group_spec("factor A {abelian; gens a,a}"), ParseError);
  EXPECT_THROW(parse_group_spec("factor A {abelian; gens a} free a"), ParseError);
  EXPECT_THROW(parse_group_spec("factor A {abelian; gens a,b,c; torsion 4,2}"), ParseError);
  EXPECT_THROW(parse_group_spec("factor A {abelian; gens a; torsion 1}"), ParseError);
  try {
    parse_group_spec("factor A {abelian gens a}");
    FAIL();
  } catch (ParseError const& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 19u);
  }
}

TEST(ParseGroupSpec, Torsion) {
  auto spec = parse_group_spec("factor A {abelian; gens a,b,c,d; torsion 2,4}\nfree t");
  EXPECT_EQ(spec.factor(0).rank, 2u);
  EXPECT_TRUE(spec.is_peripheral(0));
  auto g = nf(spec, "c^3 d^5");
  EXPECT_EQ(g[0].coords, (Coords{0, 0, 1, 1}));
  EXPECT_EQ(spec.format(nf(spec, "d^3")), "d^-1");
}

TEST(IsNrhFactor, Classification) {
  EXPECT_TRUE(is_nrh_factor({"A", 2, {}, {"a", "b"}, false}));
  EXPECT_FALSE(is_nrh_factor({"Z", 1, {}, {"z"}, false}));
  EXPECT_FALSE(is_nrh_factor({"F", 0, {2, 4}, {"x", "y"}, false}));
  EXPECT_FALSE(is_nrh_factor({"V", 1, {3}, {"x", "y"}, false}));
}

TEST(NormalForm, ForcedCancellation) {
  auto g = nf(G1(), "a b b^-1 t");
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0], syl(G1(), "A", {1, 0}));
  EXPECT_EQ(g[1], syl(G1(), "t", {1}));
  EXPECT_TRUE(nf(G1(), "t t^-1").is_identity());
  EXPECT_THROW(parse_word("q", G1()), ParseError);
  EXPECT_THROW(parse_word("A[0,0]", G1()), ParseError);
  EXPECT_THROW(parse_word("t[1]", G1()), ParseError);
}

TEST(NormalForm, MatchesRewritingOracle) {
  for (auto const* spec : {&G1(), &G2()}) {
    SplitMix rng(7);
    for (int i = 0; i < 10000; ++i) {
      auto w = random_oracle_word(*spec, rng, 20);
      Word word;
      for (auto const& l : w) word.push_back({l.factor, Coords(l.v.begin(), l.v.end()), false});
      auto g = spec->normal_form(word);
      ASSERT_TRUE(spec->is_normal(g));
      ASSERT_EQ(g, oracle::to_normal_form(*spec, w));
      Word again;
      for (auto const& s : g.syllables()) again.push_back({s.factor, s.coords, false});
      ASSERT_EQ(spec->normal_form(again), g);
    }
  }
}

TEST(Multiply, Examples) {
  auto const& s = G1();
  EXPECT_EQ(s.multiply(nf(s, "a^2 b"), nf(s, "b^-1 t")), nf(s, "a^2 t"));
  EXPECT_EQ(s.format(s.multiply(nf(s, "a^2 b"), nf(s, "b^-1 t"))), "a^2 t");
  EXPECT_EQ(s.multiply(s.multiply(nf(s, "a b"), nf(s, "t")), nf(s, "t^-1")), nf(s, "a b"));
}

TEST(Multiply, GroupLaws) {
  for (auto const* spec : {&G1(), &G2()}) {
    SplitMix rng(11);
    for (int i = 0; i < 10000; ++i) {
      auto g = random_element(*spec, kSampleWindow, rng);
      auto h = random_element(*spec, kSampleWindow, rng);
      auto k = random_element(*spec, kSampleWindow, rng);
      ASSERT_EQ(spec->multiply(spec->multiply(g, h), k), spec->multiply(g, spec->multiply(h, k)));
      ASSERT_EQ(spec->multiply(g, spec->identity()), g);
      ASSERT_EQ(spec->multiply(spec->identity(), g), g);
      ASSERT_TRUE(spec->multiply(g, spec->invert(g)).is_identity());
      ASSERT_TRUE(spec->multiply(spec->invert(g), g).is_identity());
      ASSERT_EQ(spec->invert(spec->invert(g)), g);
      auto product = oracle::to_normal_form(
          *spec, oracle::concat(oracle::from_normal_form(g), oracle::from_normal_form(h)));
      ASSERT_EQ(spec->multiply(g, h), product);
    }
  }
}

TEST(Invert, Examples) {
  auto const& s = G1();
  EXPECT_TRUE(s.invert(s.identity()).is_identity());
  auto g = nf(s, "a b^2 t^3");
  auto inv = s.invert(g);
  ASSERT_EQ(inv.size(), 2u);
  EXPECT_EQ(inv[0], syl(s, "t", {-3}));
  EXPECT_EQ(inv[1], syl(s, "A", {-1, -2}));
}

TEST(Metrics, ClosedFormExamples) {
  Metrics m(G1());
  EXPECT_EQ(m.rel_length(nf(G1(), "a^2 b^3 t a")), 3);
  EXPECT_EQ(m.rel_length(G1().identity()), 0);
  EXPECT_EQ(m.rel_length(nf(G1(), "t^5")), 5);
  EXPECT_EQ(m.x_length(nf(G1(), "a^2 b^3")), 5);
  EXPECT_EQ(m.x_length(G1().identity()), 0);
}

TEST(Metrics, ClosedFormsMatchRestrictedBfs) {
  for (auto const* spec : {&G1(), &G2()}) {
    Metrics m(*spec);
    DomainWindow window{2, 2};
    auto rel = oracle::restricted_bfs(*spec, window, true);
    auto x = oracle::restricted_bfs(*spec, window, false);
    auto elements = enumerate_domain(*spec, window);
    ASSERT_EQ(rel.size(), elements.size());
    for (auto const& g : elements) {
      ASSERT_EQ(m.rel_length(g), rel.at(oracle::key(g))) << spec->format(g);
      ASSERT_EQ(m.x_length(g), x.at(oracle::key(g))) << spec->format(g);
    }
  }
}

TEST(Metrics, TorsionClosedForm) {
  auto spec = parse_group_spec("factor A {abelian; gens a,b,c; torsion 5} free t");
  Metrics m(spec);
  auto ball = oracle::ball_bfs(spec, 5, 0);
  auto rel = oracle::ball_bfs(spec, 3, 2);
  for (auto const& g : enumerate_domain(spec, {2, 2})) {
    auto it = ball.find(oracle::key(g));
    if (it != ball.end()) {
      ASSERT_EQ(m.x_length(g), it->second) << spec.format(g);
    } else {
      ASSERT_GT(m.x_length(g), 5);
    }
    if (auto r = rel.find(oracle::key(g)); r != rel.end()) {
      ASSERT_EQ(m.rel_length(g), r->second) << spec.format(g);
    }
  }
}

TEST(Metrics, MetricAxioms) {
  for (auto const* spec : {&G1(), &G2()}) {
    Metrics m(*spec);
    SplitMix rng(3);
    for (int i = 0; i < 10000; ++i) {
      auto g = random_element(*spec, kSampleWindow, rng);
      auto h = random_element(*spec, kSampleWindow, rng);
      auto k = random_element(*spec, kSampleWindow, rng);
      ASSERT_EQ(m.rel_length(g), m.rel_length(spec->invert(g)));
      ASSERT_EQ(m.x_length(g), m.x_length(spec->invert(g)));
      ASSERT_LE(m.rel_distance(g, k), m.rel_distance(g, h) + m.rel_distance(h, k));
      ASSERT_LE(m.x_distance(g, k), m.x_distance(g, h) + m.x_distance(h, k));
      ASSERT_GE(m.x_length(g), m.rel_length(g));
    }
  }
}

TEST(Metrics, ExtraElementsAreLetters) {
  auto f = nf(G1(), "t a");
  Metrics m(G1().with_extra_x_elements({f}));
  EXPECT_FALSE(m.closed_form());
  EXPECT_EQ(m.x_length(f), 1);
  EXPECT_EQ(m.x_length(G1().invert(f)), 1);
  EXPECT_EQ(m.rel_length(f), 1);
  EXPECT_EQ(m.x_length(G1().identity()), 0);
  EXPECT_EQ(m.x_length(nf(G1(), "t a t a")), 2);
}

TEST(Metrics, ExtraElementsMatchBallSearch) {
  auto spec = G1().with_extra_x_elements({nf(G1(), "t a"), nf(G1(), "b t^-1 a")});
  Metrics m(spec);
  auto ball = oracle::ball_bfs(spec, 4, 0);
  auto rel = oracle::ball_bfs(spec, 2, 5);
  for (auto const& g : enumerate_domain(spec, {3, 1})) {
    auto it = ball.find(oracle::key(g));
    if (it != ball.end()) {
      ASSERT_EQ(m.x_length(g), it->second) << spec.format(g);
    } else {
      ASSERT_GT(m.x_length(g), 4) << spec.format(g);
    }
    auto r = rel.find(oracle::key(g));
    if (r != rel.end()) {
      ASSERT_EQ(m.rel_length(g), r->second) << spec.format(g);
    } else {
      ASSERT_GT(m.rel_length(g), 2) << spec.format(g);
    }
    auto word = m.rel_geodesic_word(g);
    ASSERT_EQ(static_cast<Coord>(word.size()), m.rel_length(g));
    ASSERT_EQ(m.word_element(word), g);
    auto xw = m.shortest_x_word(g);
    ASSERT_EQ(static_cast<Coord>(xw.size()), m.x_length(g));
    ASSERT_EQ(m.word_element(xw), g);
  }
}

TEST(Metrics, RadiusCapIsLoud) {
  Metrics m(G1().with_extra_x_elements({nf(G1(), "t a")}), MetricOptions{2, 1000});
  EXPECT_THROW(m.x_length(nf(G1(), "t^5")), CapExceeded);
  Metrics tiny(G1().with_extra_x_elements({nf(G1(), "t a")}), MetricOptions{10, 20});
  EXPECT_THROW(tiny.rel_length(nf(G1(), "t^3 a t^-2")), CapExceeded);
}

TEST(Metrics, ShortestWords) {
  Metrics m(G1());
  auto w = m.shortest_x_word(nf(G1(), "b^-1 a^2 t^-1"));
  ASSERT_EQ(w.size(), 4u);
  EXPECT_EQ(w[0], EdgeLabel::generator(0, 1));
  EXPECT_EQ(w[1], EdgeLabel::generator(0, 1));
  EXPECT_EQ(w[2], EdgeLabel::generator(1, -1));
  EXPECT_EQ(w[3], EdgeLabel::generator(2, -1));
  auto words = m.rel_geodesic_words(nf(G1(), "a"), 10);
  EXPECT_EQ(words.size(), 2u);
  EXPECT_EQ(m.rel_geodesic_words(nf(G1(), "a b"), 10).size(), 1u);
  EXPECT_THROW(m.rel_geodesic_words(nf(G1(), "a t a t a t a"), 8), CapExceeded);
}

TEST(EnumerateDomain, SmallWindows) {
  auto zero = enumerate_domain(G1(), {0, 3});
  ASSERT_EQ(zero.size(), 1u);
  EXPECT_TRUE(zero[0].is_identity());
  auto one = enumerate_domain(G1(), {1, 1});
  std::set<std::string> names;
  for (auto const& g : one) names.insert(G1().format(g));
  EXPECT_EQ(names, (std::set<std::string>{"1", "a", "a^-1", "b", "b^-1", "a b", "a^-1 b^-1",
                                          "a b^-1", "a^-1 b", "t", "t^-1"}));
}

TEST(EnumerateDomain, CountsAndClosure) {
  auto const torsion = parse_group_spec("factor A {abelian; gens a,b,c; torsion 3} free t, s");
  for (auto const* spec : {&G1(), &G2(), &torsion}) {
    for (DomainWindow w : {DomainWindow{2, 2}, DomainWindow{3, 1}, DomainWindow{1, 3}}) {
      auto all = enumerate_domain(*spec, w);
      EXPECT_EQ(all.size(), oracle::count_window(*spec, w));
      EXPECT_EQ(all.size(), window_size(*spec, w));
      std::unordered_set<NormalForm, NormalFormHash> seen(all.begin(), all.end());
      EXPECT_EQ(seen.size(), all.size());
      for (auto const& g : all) {
        ASSERT_TRUE(spec->in_window(g, w));
        ASSERT_TRUE(spec->is_normal(g));
        ASSERT_TRUE(seen.count(spec->invert(g)));
      }
    }
  }
  EXPECT_EQ(window_size(G1(), {3, 3}), 16183u);
}

TEST(RandomElement, DeterministicAndInWindow) {
  EXPECT_EQ(random_element(G1(), {3, 3}, 0), random_element(G1(), {3, 3}, 0));
  SplitMix rng(99);
  for (int i = 0; i < 10000; ++i) {
    auto g = random_element(G2(), {3, 2}, rng);
    ASSERT_TRUE(G2().in_window(g, {3, 2}));
    ASSERT_EQ(oracle::to_normal_form(G2(), oracle::from_normal_form(g)), g);
  }
}
