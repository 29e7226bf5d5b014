#include <cmath>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "tracesep/algebra.hpp"
#include "tracesep/errors.hpp"
#include "tracesep/growth.hpp"
#include "tracesep/prng.hpp"

using namespace tracesep;
using oracles::el;

namespace {

AlgebraElement random_exact(SplitMix64& rng, const SpecPtr& spec, std::size_t max_support) {
  AlgebraElement::ExactTerms terms;
  const std::size_t n = 1 + rng.below(max_support);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Syllable> raw;
    const std::size_t len = rng.below(6);
    for (std::size_t k = 0; k < len; ++k)
      raw.push_back(Syllable{static_cast<std::uint32_t>(rng.below(spec->factor_count())),
                             rng.range(-3, 3)});
    std::int64_t num = rng.range(-9, 9);
    if (num == 0) num = 1;
    terms.emplace(GroupElement::reduce(spec, raw), Rational(num, rng.range(1, 9)));
  }
  return AlgebraElement::from_exact_terms(spec, std::move(terms));
}

}  // namespace

TEST_CASE("build_idempotent per the defining formula") {
  auto dinf = oracles::dinf();
  GroupElement a = el(dinf, "a:1");
  AlgebraElement p2 = build_idempotent(a);
  CHECK(p2.support_size() == 2);
  CHECK(p2.exact_coefficient(GroupElement::identity(dinf)) == Rational(1, 2));
  CHECK(p2.exact_coefficient(a) == Rational(1, 2));

  auto z3z = oracles::z3z();
  GroupElement x = el(z3z, "x:1");
  AlgebraElement p3 = build_idempotent(x);
  CHECK(p3.support_size() == 3);
  CHECK(p3.exact_coefficient(GroupElement::identity(z3z)) == Rational(1, 3));
  CHECK(p3.exact_coefficient(x) == Rational(1, 3));
  CHECK(p3.exact_coefficient(el(z3z, "x:2")) == Rational(1, 3));

  AlgebraElement pe = build_idempotent(GroupElement::identity(z3z));
  CHECK(pe.support_size() == 1);
  CHECK(pe.exact_coefficient(GroupElement::identity(z3z)) == Rational(1));

  CHECK_THROWS_AS(build_idempotent(el(z3z, "y:1")), InfiniteOrder);
}

TEST_CASE("convolution embeds the group law and fixes idempotents") {
  auto z3z = oracles::z3z();
  GroupElement x = el(z3z, "x:1");
  AlgebraElement p = build_idempotent(x);
  CHECK(convolve(p, p) == p);
  // The generator permutes the powers: g * p = p.
  AlgebraElement gx = AlgebraElement::term(x, Rational(1));
  CHECK(convolve(gx, p) == p);
  // Group-law embedding: x * x^2 = e with coefficient 1.
  AlgebraElement prod = convolve(gx, AlgebraElement::term(el(z3z, "x:2"), Rational(1)));
  CHECK(prod.support_size() == 1);
  CHECK(prod.exact_coefficient(GroupElement::identity(z3z)) == Rational(1));
}

TEST_CASE("is_idempotent") {
  auto z3z = oracles::z3z();
  GroupElement x = el(z3z, "x:1");
  CHECK(is_idempotent(build_idempotent(x)));
  CHECK_FALSE(is_idempotent(AlgebraElement::term(x, Rational(1))));
  CHECK(is_idempotent(AlgebraElement::zero(z3z, CoeffMode::exact)));
  CHECK(is_idempotent(AlgebraElement::term(GroupElement::identity(z3z), Rational(1))));
  CHECK_THROWS_AS(is_idempotent(AlgebraElement::term(x, 0.5)), ModeMismatch);
}

TEST_CASE("exact idempotency over the radius-4 balls") {
  for (const SpecPtr& spec : {oracles::dinf(), oracles::z3z(), oracles::z2z3()}) {
    auto ball = enumerate_ball(spec, 4);
    std::size_t torsion = 0;
    for (const auto& g : ball) {
      if (!g.order().is_finite()) continue;
      ++torsion;
      AlgebraElement p = build_idempotent(g);
      CHECK(convolve(p, p) == p);
      CHECK(p.support_size() == g.order().value());
    }
    CHECK(torsion >= 3);  // e plus at least one torsion class
  }
}

TEST_CASE("sobolev norm evaluates the defining formula") {
  auto z3z = oracles::z3z();
  // Single term, coefficient 1 at length 1, s = 2: (1+1)^2 = 4.
  CHECK(sobolev_norm(AlgebraElement::term(el(z3z, "x:1"), Rational(1)), {2.0}) ==
        doctest::Approx(4.0).epsilon(1e-12));
  // The identity has length 0, so every s gives 1.
  for (double s : {0.0, 1.0, 3.5})
    CHECK(sobolev_norm(AlgebraElement::term(GroupElement::identity(z3z), Rational(1)), {s}) ==
          doctest::Approx(1.0).epsilon(1e-12));
  // Idempotent of x at s = 1: sqrt((1/9)(1 + 4 + 4)) = 1, summed by hand.
  AlgebraElement p = build_idempotent(el(z3z, "x:1"));
  double by_hand = 0.0;
  for (const auto& [g, c] : p.exact_terms()) {
    const double w = 1.0 + static_cast<double>(g.length());
    by_hand += c.to_double() * c.to_double() * w * w;
  }
  CHECK(by_hand == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sobolev_norm(p, {1.0}) == doctest::Approx(std::sqrt(by_hand)).epsilon(1e-12));
  CHECK_THROWS_AS(sobolev_norm(p, {-1.0}), InvalidParameter);
}

TEST_CASE("sobolev monotonicity in s") {
  SplitMix64 rng(21);
  auto z3z = oracles::z3z();
  for (int i = 0; i < 200; ++i) {
    AlgebraElement a = random_exact(rng, z3z, 8);
    if (a.is_zero()) continue;
    const double s = 2.0 * rng.unit();
    const double t = s + 0.1 + 2.0 * rng.unit();
    const double ns = sobolev_norm(a, {s});
    const double nt = sobolev_norm(a, {t});
    CHECK(ns <= nt * (1.0 + 1e-12));
    std::uint64_t max_len = 0;
    for (const auto& [g, c] : a.exact_terms()) max_len = std::max(max_len, g.length());
    if (max_len >= 1) CHECK(nt > ns);
  }
}

TEST_CASE("delta trace") {
  auto z3z = oracles::z3z();
  GroupElement x = el(z3z, "x:1");
  CHECK(delta_trace(build_idempotent(x)) == Rational(1, 3));
  CHECK(delta_trace(AlgebraElement::term(x, Rational(1))) == Rational(0));
  CHECK(delta_trace(AlgebraElement::term(GroupElement::identity(z3z), Rational(1))) == Rational(1));
}

TEST_CASE("delta trace has the trace property at finite support") {
  SplitMix64 rng(31);
  for (const SpecPtr& spec : {oracles::dinf(), oracles::z3z()}) {
    for (int i = 0; i < 150; ++i) {
      AlgebraElement a = random_exact(rng, spec, 8);
      AlgebraElement b = random_exact(rng, spec, 8);
      CHECK(delta_trace(convolve(a, b)) == delta_trace(convolve(b, a)));
    }
  }
}

TEST_CASE("augmentation trace and the maximal-algebra separation note") {
  auto z3z = oracles::z3z();
  GroupElement x = el(z3z, "x:1");
  CHECK(augmentation_trace(build_idempotent(x)) == Rational(1));
  CHECK(augmentation_trace(AlgebraElement::term(GroupElement::identity(z3z), Rational(1))) ==
        Rational(1));
  AlgebraElement x_minus_e =
      add(AlgebraElement::term(x, Rational(1)),
          AlgebraElement::term(GroupElement::identity(z3z), Rational(-1)));
  CHECK(augmentation_trace(x_minus_e) == Rational(0));
  // Pairing delta with augmentation always separates [1] from [p]:
  // det ((1, 1/d), (1, 1)) = 1 - 1/d != 0 for d >= 2.
  for (std::int64_t d : {2, 3, 5, 7}) {
    const Rational det = Rational(1) * Rational(1) - Rational(1, d) * Rational(1);
    CHECK_FALSE(det.is_zero());
  }
}

TEST_CASE("value-form traces work in both coefficient modes") {
  auto z3z = oracles::z3z();
  GroupElement x = el(z3z, "x:1");
  AlgebraElement p = build_idempotent(x);
  CHECK(delta_trace_value(p) == doctest::Approx(1.0 / 3.0));
  CHECK(augmentation_trace_value(p) == doctest::Approx(1.0));
  AlgebraElement f = add(AlgebraElement::term(x, 0.25),
                         AlgebraElement::term(GroupElement::identity(z3z), 0.5));
  CHECK(delta_trace_value(f) == doctest::Approx(0.5));
  CHECK(augmentation_trace_value(f) == doctest::Approx(0.75));
}

TEST_CASE("augmentation is a ring homomorphism on exact elements") {
  SplitMix64 rng(17);
  auto dinf = oracles::dinf();
  for (int i = 0; i < 150; ++i) {
    AlgebraElement a = random_exact(rng, dinf, 6);
    AlgebraElement b = random_exact(rng, dinf, 6);
    CHECK(augmentation_trace(convolve(a, b)) == augmentation_trace(a) * augmentation_trace(b));
    CHECK(augmentation_trace(add(a, b)) == augmentation_trace(a) + augmentation_trace(b));
  }
}

TEST_CASE("mode and spec mismatches are rejected") {
  auto z3z = oracles::z3z();
  auto dinf = oracles::dinf();
  AlgebraElement exact = AlgebraElement::term(el(z3z, "x:1"), Rational(1));
  AlgebraElement floating = AlgebraElement::term(el(z3z, "x:1"), 1.0);
  CHECK_THROWS_AS(convolve(exact, floating), ModeMismatch);
  CHECK_THROWS_AS(add(exact, floating), ModeMismatch);
  CHECK_THROWS_AS(scale(floating, Rational(2)), ModeMismatch);
  CHECK_THROWS_AS(scale(exact, 2.0), ModeMismatch);
  CHECK_THROWS_AS(augmentation_trace(floating), ModeMismatch);
  AlgebraElement other = AlgebraElement::term(el(dinf, "a:1"), Rational(1));
  CHECK_THROWS_AS(convolve(exact, other), MixedSpecs);
}

TEST_CASE("zero coefficients are never stored") {
  auto z3z = oracles::z3z();
  GroupElement x = el(z3z, "x:1");
  AlgebraElement a = AlgebraElement::term(x, Rational(1, 2));
  AlgebraElement b = AlgebraElement::term(x, Rational(-1, 2));
  CHECK(add(a, b).support_size() == 0);
  CHECK(AlgebraElement::term(x, Rational(0)).support_size() == 0);
  CHECK(scale(a, Rational(0)).support_size() == 0);
}

TEST_CASE("algebra element files round trip") {
  auto z3z = oracles::z3z();
  SplitMix64 rng(13);
  AlgebraElement exact = random_exact(rng, z3z, 7);
  std::stringstream buf;
  save_algebra_element(buf, exact);
  CHECK(load_algebra_element(buf, z3z) == exact);

  AlgebraElement floating = AlgebraElement::from_float_terms(
      z3z, {{el(z3z, "x:1"), 0.1234567890123456}, {el(z3z, "y:2"), -3.5e-7}});
  std::stringstream buf2;
  save_algebra_element(buf2, floating);
  CHECK(load_algebra_element(buf2, z3z) == floating);

  std::stringstream bad("tracesep-algebra/1\nmode = exact\nspec_hash = 0000000000000000\n");
  CHECK_THROWS_AS(load_algebra_element(bad, z3z), MixedSpecs);
  std::stringstream junk("not a header\n");
  CHECK_THROWS_AS(load_algebra_element(junk, z3z), MalformedWord);
}
