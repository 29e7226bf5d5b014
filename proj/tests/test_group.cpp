#include <algorithm>

#include "doctest.h"
#include "oracles.hpp"
#include "tracesep/errors.hpp"
#include "tracesep/growth.hpp"
#include "tracesep/prng.hpp"

using namespace tracesep;
using oracles::el;

TEST_CASE("parse_group_spec accepts the bundled groups") {
  SpecPtr z3z = parse_group_spec(
      "format_version = 1\n"
      "type = free_product\n"
      "factor = 3 x\n"
      "factor = 0 y\n");
  CHECK(z3z->factor_count() == 2);
  CHECK(z3z->factor(0).order == 3);
  CHECK(z3z->factor(1).order == 0);
  CHECK(z3z->factor_index("y").value() == 1);

  SpecPtr dinf = parse_group_spec(
      "# infinite dihedral\n"
      "format_version = 1\n"
      "type = free_product\n"
      "factor = 2 a\n"
      "factor = 2 b\n");
  CHECK(dinf->factor_count() == 2);
  CHECK(dinf->same_group(*oracles::dinf()));
}

TEST_CASE("parse_group_spec rejects bad documents with named fields") {
  const char* header = "format_version = 1\ntype = free_product\n";
  CHECK_THROWS_AS(parse_group_spec(std::string(header) + "factor = 1 t\n"), InvalidSpec);
  CHECK_THROWS_AS(parse_group_spec(std::string(header)), InvalidSpec);  // no factors
  CHECK_THROWS_AS(parse_group_spec(std::string(header) + "factor = 2 t\nfactor = 3 t\n"),
                  InvalidSpec);  // duplicate names
  CHECK_THROWS_AS(parse_group_spec(std::string(header) + "factor = -2 t\n"), InvalidSpec);
  CHECK_THROWS_AS(parse_group_spec("type = free_product\nfactor = 2 a\n"), MalformedSpec);
  CHECK_THROWS_AS(parse_group_spec("format_version = 2\ntype = free_product\nfactor = 2 a\n"),
                  InvalidSpec);
  CHECK_THROWS_AS(parse_group_spec("format_version = 1\ntype = direct_product\nfactor = 2 a\n"),
                  InvalidSpec);
  CHECK_THROWS_AS(parse_group_spec(std::string(header) + "nonsense line\n"), MalformedSpec);
  CHECK_THROWS_AS(parse_group_spec(std::string(header) + "factor = two a\n"), MalformedSpec);
}

TEST_CASE("normal form reduces the spec examples") {
  auto z3z = oracles::z3z();
  CHECK(el(z3z, "x:1 x:1 x:1").is_identity());
  GroupElement y_x2_x_y = el(z3z, "y:1 x:2 x:1 y:1");
  REQUIRE(y_x2_x_y.syllables().size() == 1);
  CHECK(y_x2_x_y.syllables()[0] == Syllable{1, 2});

  auto dinf = oracles::dinf();
  CHECK(el(dinf, "a:1 b:1 b:1 a:1").is_identity());
}

TEST_CASE("normal form agrees with the rewrite oracle on random words") {
  SplitMix64 rng(42);
  for (const SpecPtr& spec : {oracles::dinf(), oracles::z3z(), oracles::z2z3()}) {
    for (int i = 0; i < 400; ++i) {
      std::vector<Syllable> raw;
      const std::size_t n = rng.below(13);
      for (std::size_t k = 0; k < n; ++k)
        raw.push_back(Syllable{static_cast<std::uint32_t>(rng.below(spec->factor_count())),
                               rng.range(-6, 6)});
      GroupElement reduced = GroupElement::reduce(spec, raw);
      CHECK(reduced.syllables() == oracles::rewrite_reduce(*spec, raw));
      CHECK(GroupElement::reduce(spec, reduced.syllables()) == reduced);
    }
  }
}

TEST_CASE("multiply, inverse, length match the axioms") {
  auto z3z = oracles::z3z();
  GroupElement x = el(z3z, "x:1");
  GroupElement x2 = el(z3z, "x:2");
  CHECK(x.times(x2).is_identity());
  CHECK(GroupElement::identity(z3z).length() == 0);
  CHECK(x2.length() == 1);  // x^2 = x^-1 geodesically
  GroupElement y5 = el(z3z, "y:5");
  CHECK(y5.length() == 5);
  CHECK(y5.inverse() == el(z3z, "y:-5"));
  CHECK(y5.inverse().length() == 5);

  // Axioms over the radius-4 ball.
  auto ball = enumerate_ball(z3z, 4);
  for (const auto& a : ball) {
    CHECK(a.inverse().length() == a.length());
    for (const auto& b : ball) CHECK(a.times(b).length() <= a.length() + b.length());
  }
}

TEST_CASE("mixed specs are rejected") {
  GroupElement x = el(oracles::z3z(), "x:1");
  GroupElement a = el(oracles::dinf(), "a:1");
  CHECK_THROWS_AS(x.times(a), MixedSpecs);
  CHECK_THROWS_AS(x.conjugate_to(a), MixedSpecs);
}

TEST_CASE("element order") {
  auto z3z = oracles::z3z();
  CHECK(el(z3z, "x:1").order() == Order::finite(3));
  CHECK(el(z3z, "x:2").order() == Order::finite(3));
  CHECK_FALSE(el(z3z, "y:1").order().is_finite());
  CHECK(el(z3z, "y:1 x:1 y:-1").order() == Order::finite(3));
  CHECK(GroupElement::identity(z3z).order() == Order::finite(1));
  CHECK_FALSE(el(z3z, "x:1 y:1").order().is_finite());
  CHECK_THROWS_AS(el(z3z, "y:1").order().value(), InfiniteOrder);
}

TEST_CASE("cyclic reduction") {
  auto z3z = oracles::z3z();
  auto [core1, conj1] = el(z3z, "y:1 x:1 y:-1").cyclic_reduction();
  CHECK(core1 == el(z3z, "x:1"));
  CHECK(conj1 == el(z3z, "y:1"));

  auto [core2, conj2] = GroupElement::identity(z3z).cyclic_reduction();
  CHECK(core2.is_identity());
  CHECK(conj2.is_identity());

  // a b a in the infinite dihedral group: the wrap cancels (a*a = e), so
  // the standard rule conjugates down to the core b; the brute-force
  // oracle confirms a b a and b are conjugate.
  auto dinf = oracles::dinf();
  GroupElement aba = el(dinf, "a:1 b:1 a:1");
  auto [core3, conj3] = aba.cyclic_reduction();
  CHECK(core3 == el(dinf, "b:1"));
  CHECK(conj3 == el(dinf, "a:1"));
  auto brute = oracles::brute_conjugates(aba, enumerate_ball(dinf, 6));
  CHECK(brute.count(core3) == 1);

  // Invariant on random elements: g == conj * core * conj^-1 and the
  // core is cyclically reduced.
  SplitMix64 rng(7);
  for (const SpecPtr& spec : {oracles::dinf(), oracles::z3z(), oracles::z2z3()}) {
    for (int i = 0; i < 300; ++i) {
      std::vector<Syllable> raw;
      const std::size_t n = rng.below(10);
      for (std::size_t k = 0; k < n; ++k)
        raw.push_back(Syllable{static_cast<std::uint32_t>(rng.below(spec->factor_count())),
                               rng.range(-5, 5)});
      GroupElement g = GroupElement::reduce(spec, raw);
      auto [core, conj] = g.cyclic_reduction();
      CHECK(conj.times(core).times(conj.inverse()) == g);
      const auto& syl = core.syllables();
      if (syl.size() >= 2) CHECK(syl.front().factor != syl.back().factor);
      CHECK(core.length() <= g.length());
    }
  }
}

TEST_CASE("are_conjugate decides the worked examples and brute force") {
  auto z3z = oracles::z3z();
  CHECK(el(z3z, "y:1 x:1 y:-1").conjugate_to(el(z3z, "x:1")));
  CHECK_FALSE(el(z3z, "x:1").conjugate_to(el(z3z, "x:2")));
  // Brute force: no conjugator of length <= 6 sends x to x^2.
  auto ball6 = enumerate_ball(z3z, 6);
  auto brute_x = oracles::brute_conjugates(el(z3z, "x:1"), ball6);
  CHECK(brute_x.count(el(z3z, "x:2")) == 0);

  auto dinf = oracles::dinf();
  CHECK_FALSE(el(dinf, "a:1").conjugate_to(el(dinf, "b:1")));
  auto brute_a = oracles::brute_conjugates(el(dinf, "a:1"), enumerate_ball(dinf, 8));
  CHECK(brute_a.count(el(dinf, "b:1")) == 0);
}

TEST_CASE("are_conjugate equals brute-force partition on the radius-5 ball") {
  for (const SpecPtr& spec : {oracles::dinf(), oracles::z2z3()}) {
    auto ball5 = enumerate_ball(spec, 5);
    auto conjugators = enumerate_ball(spec, 8);
    // Brute fingerprint: the (length, word)-least reachable conjugate.
    std::vector<std::string> fp;
    for (const auto& g : ball5) {
      std::uint64_t best_len = UINT64_MAX;
      std::string best;
      for (const auto& w : conjugators) {
        GroupElement c = w.times(g).times(w.inverse());
        if (c.length() > best_len) continue;
        std::string word = c.word();
        if (c.length() < best_len || word < best) {
          best_len = c.length();
          best = std::move(word);
        }
      }
      fp.push_back(best);
    }
    for (std::size_t i = 0; i < ball5.size(); ++i)
      for (std::size_t j = i; j < ball5.size(); ++j)
        CHECK(ball5[i].conjugate_to(ball5[j]) == (fp[i] == fp[j]));
  }
}

TEST_CASE("order is a conjugation invariant") {
  SplitMix64 rng(3);
  for (const SpecPtr& spec : {oracles::dinf(), oracles::z3z()}) {
    auto ball = enumerate_ball(spec, 4);
    for (const auto& a : ball) {
      for (int k = 0; k < 3; ++k) {
        std::vector<Syllable> raw;
        const std::size_t n = rng.below(6);
        for (std::size_t t = 0; t < n; ++t)
          raw.push_back(Syllable{static_cast<std::uint32_t>(rng.below(spec->factor_count())),
                                 rng.range(-3, 3)});
        GroupElement w = GroupElement::reduce(spec, raw);
        CHECK(a.conjugated_by(w).order() == a.order());
      }
    }
  }
}

TEST_CASE("element words round trip") {
  SplitMix64 rng(9);
  auto z3z = oracles::z3z();
  CHECK(GroupElement::identity(z3z).word() == "e");
  CHECK(el(z3z, "e").is_identity());
  CHECK(el(z3z, "y:1 x:2 y:1").word() == "y:1 x:2 y:1");
  CHECK(el(z3z, "y:-3").word() == "y:-3");
  CHECK_THROWS_AS(el(z3z, "z:1"), MalformedWord);
  CHECK_THROWS_AS(el(z3z, "x"), MalformedWord);
  CHECK_THROWS_AS(el(z3z, "x:two"), MalformedWord);
  CHECK_THROWS_AS(el(z3z, ""), MalformedWord);
  for (int i = 0; i < 200; ++i) {
    std::vector<Syllable> raw;
    const std::size_t n = rng.below(8);
    for (std::size_t k = 0; k < n; ++k)
      raw.push_back(Syllable{static_cast<std::uint32_t>(rng.below(2)), rng.range(-4, 4)});
    GroupElement g = GroupElement::reduce(z3z, raw);
    CHECK(GroupElement::parse(z3z, g.word()) == g);
  }
}
