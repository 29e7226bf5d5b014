#include "tracesep/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "tracesep/algebra.hpp"
#include "tracesep/errors.hpp"
#include "tracesep/growth.hpp"
#include "tracesep/prng.hpp"
#include "tracesep/report.hpp"
#include "tracesep/traces.hpp"

namespace tracesep {

namespace {

SpecPtr make_dinf() {
  return GroupSpec::make({CyclicFactor{2, "a"}, CyclicFactor{2, "b"}});
}
SpecPtr make_z3z() {
  return GroupSpec::make({CyclicFactor{3, "x"}, CyclicFactor{0, "y"}});
}
SpecPtr make_z2z3() {
  return GroupSpec::make({CyclicFactor{2, "u"}, CyclicFactor{3, "v"}});
}
SpecPtr make_z2z3z5() {
  return GroupSpec::make({CyclicFactor{2, "u"}, CyclicFactor{3, "v"}, CyclicFactor{5, "w"}});
}

struct Check {
  std::string name;
  bool passed = true;
  std::string detail;
};

/// Independent reduction oracle: rescan from scratch after every merge
/// instead of maintaining a stack.
std::vector<Syllable> naive_reduce(const GroupSpec& spec, std::vector<Syllable> word) {
  auto canon = [&](std::uint32_t factor, std::int64_t e) {
    const std::uint64_t d = spec.factor(factor).order;
    if (d == 0) return e;
    std::int64_t r = e % static_cast<std::int64_t>(d);
    if (r < 0) r += static_cast<std::int64_t>(d);
    return r;
  };
  for (auto& s : word) s.exponent = canon(s.factor, s.exponent);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < word.size(); ++i) {
      if (word[i].exponent == 0) {
        word.erase(word.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
      if (i + 1 < word.size() && word[i].factor == word[i + 1].factor) {
        word[i].exponent = canon(word[i].factor, word[i].exponent + word[i + 1].exponent);
        word.erase(word.begin() + static_cast<std::ptrdiff_t>(i + 1));
        changed = true;
        break;
      }
    }
  }
  return word;
}

std::vector<Syllable> random_raw_word(SplitMix64& rng, const GroupSpec& spec,
                                      std::size_t max_syllables, std::int64_t max_exp) {
  const std::size_t n = rng.below(max_syllables + 1);
  std::vector<Syllable> word;
  for (std::size_t i = 0; i < n; ++i) {
    Syllable s;
    s.factor = static_cast<std::uint32_t>(rng.below(spec.factor_count()));
    s.exponent = rng.range(-max_exp, max_exp);
    word.push_back(s);
  }
  return word;
}

GroupElement random_element(SplitMix64& rng, const SpecPtr& spec, std::size_t max_syllables,
                            std::int64_t max_exp) {
  auto raw = random_raw_word(rng, *spec, max_syllables, max_exp);
  return GroupElement::reduce(spec, raw);
}

Rational random_rational(SplitMix64& rng) {
  std::int64_t num = rng.range(-9, 9);
  if (num == 0) num = 1;
  return Rational(num, rng.range(1, 9));
}

AlgebraElement random_exact_element(SplitMix64& rng, const SpecPtr& spec, std::size_t max_support) {
  AlgebraElement::ExactTerms terms;
  const std::size_t n = 1 + rng.below(max_support);
  for (std::size_t i = 0; i < n; ++i)
    terms.emplace(random_element(rng, spec, 6, 3), random_rational(rng));
  return AlgebraElement::from_exact_terms(spec, std::move(terms));
}

Rational cofactor_determinant(const std::vector<std::vector<Rational>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return Rational(1);
  if (n == 1) return m[0][0];
  Rational det(0);
  int sign = 1;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<Rational>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<Rational> row;
      for (std::size_t jj = 0; jj < n; ++jj)
        if (jj != j) row.push_back(m[i][jj]);
      minor.push_back(std::move(row));
    }
    det += Rational(sign) * m[0][j] * cofactor_determinant(minor);
    sign = -sign;
  }
  return det;
}

/// Class fingerprint: the (length, word)-minimal element of
/// {w g w^-1 : l(w) <= conj_radius}. On a small ball this reaches the
/// cyclically reduced rotations, so equal fingerprints mean equal classes.
std::string brute_class_fingerprint(const GroupElement& g,
                                    const std::vector<GroupElement>& conjugators) {
  std::uint64_t best_len = UINT64_MAX;
  std::string best_word;
  for (const GroupElement& w : conjugators) {
    GroupElement c = g.conjugated_by(w);
    const std::uint64_t len = c.length();
    if (len > best_len) continue;
    std::string word = c.word();
    if (len < best_len || word < best_word) {
      best_len = len;
      best_word = std::move(word);
    }
  }
  return best_word;
}

using CheckFn = std::function<void(Check&)>;

struct Suite {
  std::vector<SpecPtr> groups;
  SplitMix64 rng;
  const VerifyOptions& options;

  explicit Suite(const VerifyOptions& opts)
      : groups{make_dinf(), make_z3z(), make_z2z3()}, rng(opts.seed), options(opts) {}
};

void check_normal_form_uniqueness(Suite& s, Check& c) {
  std::size_t cases = 0;
  for (const SpecPtr& spec : s.groups) {
    for (unsigned i = 0; i < 200 * s.options.scale; ++i) {
      auto raw = random_raw_word(s.rng, *spec, 12, 6);
      GroupElement nf = GroupElement::reduce(spec, raw);
      auto oracle = naive_reduce(*spec, raw);
      if (nf.syllables() != oracle) {
        c.passed = false;
        c.detail = "normal form disagrees with the rewrite oracle";
        return;
      }
      // Idempotence, and stability under inserted relator noise.
      if (GroupElement::reduce(spec, nf.syllables()).syllables() != nf.syllables()) {
        c.passed = false;
        c.detail = "normal form is not idempotent";
        return;
      }
      std::vector<Syllable> noisy = raw;
      const std::size_t at = s.rng.below(noisy.size() + 1);
      const std::uint32_t f = static_cast<std::uint32_t>(s.rng.below(spec->factor_count()));
      const std::uint64_t d = spec->factor(f).order;
      const std::int64_t trivial_exp =
          d == 0 ? 0 : static_cast<std::int64_t>(d) * s.rng.range(1, 2);
      if (d == 0) {
        const std::int64_t e = s.rng.range(1, 4);
        noisy.insert(noisy.begin() + static_cast<std::ptrdiff_t>(at), {Syllable{f, e}, Syllable{f, -e}});
      } else {
        noisy.insert(noisy.begin() + static_cast<std::ptrdiff_t>(at), Syllable{f, trivial_exp});
      }
      if (!(GroupElement::reduce(spec, noisy) == nf)) {
        c.passed = false;
        c.detail = "inserted relator changed the normal form";
        return;
      }
      ++cases;
    }
  }
  c.detail = "cases=" + std::to_string(cases);
}

void check_length_axioms(Suite& s, Check& c) {
  std::size_t pairs = 0;
  for (const SpecPtr& spec : s.groups) {
    auto ball = enumerate_ball(spec, 6);
    if (GroupElement::identity(spec).length() != 0) {
      c.passed = false;
      c.detail = "l(e) != 0";
      return;
    }
    for (const GroupElement& a : ball) {
      if (a.inverse().length() != a.length()) {
        c.passed = false;
        c.detail = "l(a^-1) != l(a) at " + a.word();
        return;
      }
      for (const GroupElement& b : ball) {
        if (a.times(b).length() > a.length() + b.length()) {
          c.passed = false;
          c.detail = "subadditivity fails at " + a.word() + " * " + b.word();
          return;
        }
        ++pairs;
      }
    }
  }
  c.detail = "pairs=" + std::to_string(pairs);
}

void check_conjugacy_brute_force(Suite& s, Check& c) {
  std::size_t pairs = 0;
  for (const SpecPtr& spec : s.groups) {
    auto ball5 = enumerate_ball(spec, 5);
    auto conjugators = enumerate_ball(spec, 8);
    std::vector<std::string> fp;
    fp.reserve(ball5.size());
    for (const GroupElement& g : ball5) fp.push_back(brute_class_fingerprint(g, conjugators));
    for (std::size_t i = 0; i < ball5.size(); ++i) {
      for (std::size_t j = i; j < ball5.size(); ++j) {
        const bool expect = fp[i] == fp[j];
        if (ball5[i].conjugate_to(ball5[j]) != expect ||
            ball5[j].conjugate_to(ball5[i]) != expect) {
          c.passed = false;
          c.detail = "disagrees with brute force on (" + ball5[i].word() + ", " +
                     ball5[j].word() + ")";
          return;
        }
        ++pairs;
      }
    }
  }
  c.detail = "pairs=" + std::to_string(pairs);
}

void check_order_conjugation_invariant(Suite& s, Check& c) {
  std::size_t cases = 0;
  for (const SpecPtr& spec : s.groups) {
    auto ball = enumerate_ball(spec, 4);
    for (const GroupElement& a : ball) {
      for (unsigned k = 0; k < 3 * s.options.scale; ++k) {
        GroupElement w = random_element(s.rng, spec, 5, 3);
        if (!(a.conjugated_by(w).order() == a.order())) {
          c.passed = false;
          c.detail = "order changed under conjugation of " + a.word() + " by " + w.word();
          return;
        }
        ++cases;
      }
    }
  }
  c.detail = "cases=" + std::to_string(cases);
}

void check_idempotency(Suite& s, Check& c) {
  std::size_t cases = 0;
  for (const SpecPtr& spec : s.groups) {
    auto ball = enumerate_ball(spec, 4);
    for (const GroupElement& g : ball) {
      if (!g.order().is_finite()) continue;
      AlgebraElement p = build_idempotent(g);
      if (p.support_size() != g.order().value()) {
        c.passed = false;
        c.detail = "support of p is not the order of " + g.word();
        return;
      }
      if (!s.options.fault_inject.empty() && s.options.fault_inject == "idempotency" &&
          cases == 0) {
        p = add(p, AlgebraElement::term(g, Rational(1, 7)));
      }
      if (!is_idempotent(p)) {
        c.passed = false;
        c.detail = "p*p != p for the idempotent of " + g.word();
        return;
      }
      ++cases;
    }
  }
  c.detail = "torsion_elements=" + std::to_string(cases);
}

void check_delta_commutator(Suite& s, Check& c) {
  std::size_t cases = 0;
  for (const SpecPtr& spec : s.groups) {
    for (unsigned i = 0; i < 100 * s.options.scale; ++i) {
      AlgebraElement a = random_exact_element(s.rng, spec, 8);
      AlgebraElement b = random_exact_element(s.rng, spec, 8);
      if (!(delta_trace(convolve(a, b)) == delta_trace(convolve(b, a)))) {
        c.passed = false;
        c.detail = "delta(ab) != delta(ba)";
        return;
      }
      ++cases;
    }
  }
  c.detail = "cases=" + std::to_string(cases);
}

void check_sobolev_monotonicity(Suite& s, Check& c) {
  std::size_t cases = 0;
  for (const SpecPtr& spec : s.groups) {
    for (unsigned i = 0; i < 100 * s.options.scale; ++i) {
      AlgebraElement a = random_exact_element(s.rng, spec, 8);
      if (a.is_zero()) continue;
      const double lo = 2.0 * s.rng.unit();
      const double hi = lo + 0.1 + 2.0 * s.rng.unit();
      const double norm_lo = sobolev_norm(a, {lo});
      const double norm_hi = sobolev_norm(a, {hi});
      std::uint64_t max_len = 0;
      for (const auto& [g, coeff] : a.exact_terms()) max_len = std::max(max_len, g.length());
      const bool ok = max_len == 0 ? norm_hi == norm_lo : norm_hi > norm_lo;
      if (!ok || norm_lo > norm_hi * (1.0 + 1e-12)) {
        c.passed = false;
        c.detail = "norm not monotone in s";
        return;
      }
      ++cases;
    }
  }
  c.detail = "cases=" + std::to_string(cases);
}

void check_augmentation_homomorphism(Suite& s, Check& c) {
  std::size_t cases = 0;
  for (const SpecPtr& spec : s.groups) {
    for (unsigned i = 0; i < 100 * s.options.scale; ++i) {
      AlgebraElement a = random_exact_element(s.rng, spec, 6);
      AlgebraElement b = random_exact_element(s.rng, spec, 6);
      if (!(augmentation_trace(convolve(a, b)) == augmentation_trace(a) * augmentation_trace(b)) ||
          !(augmentation_trace(add(a, b)) == augmentation_trace(a) + augmentation_trace(b))) {
        c.passed = false;
        c.detail = "augmentation is not a ring homomorphism";
        return;
      }
      ++cases;
    }
  }
  c.detail = "cases=" + std::to_string(cases);
}

void check_worker_determinism(Suite& s, Check& c) {
  SpecPtr z3z = s.groups[1];
  GroupElement x = GroupElement::parse(z3z, "x:1");
  EnumerationLimits one{4'000'000, 1};
  EnumerationLimits many{4'000'000, std::max(2u, s.options.workers)};
  EnumerationLimits three{4'000'000, 3};
  ConjugacyProfile p1 = conjugacy_shell_counts(x, 13, one);
  ConjugacyProfile p2 = conjugacy_shell_counts(x, 13, many);
  ConjugacyProfile p3 = conjugacy_shell_counts(x, 13, three);
  if (p1.counts() != p2.counts() || p1.counts() != p3.counts()) {
    c.passed = false;
    c.detail = "profiles differ across worker counts";
    return;
  }
  c.detail = "radius=13, three worker configurations";
}

void check_closed_form_matches_enumeration(Suite& s, Check& c) {
  struct Case {
    SpecPtr spec;
    const char* rep;
  } cases[] = {{s.groups[0], "a:1"}, {s.groups[1], "x:1"}};
  for (const auto& [spec, rep_word] : cases) {
    GroupElement rep = GroupElement::parse(spec, rep_word);
    ConjugacyProfile closed = profile_from_formula(rep, 15);
    ConjugacyProfile enumerated = conjugacy_shell_counts(rep, 15);
    for (std::uint32_t l = 0; l <= 15; ++l) {
      if (closed.count(l) != enumerated.count(l)) {
        c.passed = false;
        c.detail = std::string("mismatch at l=") + std::to_string(l) + " for " + rep_word;
        return;
      }
    }
  }
  c.detail = "shells=0..15 on C(a) and C(x)";
}

void check_profile_conjugation_invariant(Suite& s, Check& c) {
  struct Case {
    SpecPtr spec;
    const char* rep;
  } cases[] = {{s.groups[0], "a:1"}, {s.groups[1], "x:1"}, {s.groups[2], "v:1"}};
  for (const auto& [spec, rep_word] : cases) {
    GroupElement g = GroupElement::parse(spec, rep_word);
    ConjugacyProfile base = conjugacy_shell_counts(g, 12);
    for (unsigned k = 0; k < 2 * s.options.scale; ++k) {
      GroupElement w = random_element(s.rng, spec, 4, 2);
      GroupElement conj = g.conjugated_by(w);
      if (conj.length() > 12) continue;
      ConjugacyProfile moved = conjugacy_shell_counts(conj, 12);
      if (base.counts() != moved.counts()) {
        c.passed = false;
        c.detail = std::string("profile changed when ") + rep_word + " was conjugated by " +
                   w.word();
        return;
      }
    }
  }
  c.detail = "radius=12, random conjugators";
}

void check_schedule_reverification(Suite& s, Check& c) {
  (void)s;
  ConjugacyProfile profile = synthetic_profile(parse_synthetic("2^l"), 200);
  ShellSchedule schedule = find_shell_sequence(profile, 4.0, 5);
  if (schedule.size() != 5) {
    c.passed = false;
    c.detail = "expected 5 schedule terms on 2^l to length 200, got " +
               std::to_string(schedule.size());
    return;
  }
  // Greedy minimality, checked by direct scan with exact arithmetic.
  std::uint32_t prev = 0;
  bool have_prev = false;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const std::uint64_t power = 4 * (i + 1);
    std::uint32_t expected = UINT32_MAX;
    for (std::uint32_t l = have_prev ? prev + 1 : 0; l <= profile.radius(); ++l) {
      if (profile.count(l) > BigNat::power(l + 1, power)) {
        expected = l;
        break;
      }
    }
    if (schedule.indices[i] != expected) {
      c.passed = false;
      c.detail = "greedy index " + std::to_string(i + 1) + " is " +
                 std::to_string(schedule.indices[i]) + ", direct scan gives " +
                 std::to_string(expected);
      return;
    }
    prev = expected;
    have_prev = true;
  }
  std::ostringstream detail;
  detail << "indices =";
  for (std::uint32_t l : schedule.indices) detail << " " << l;
  c.detail = detail.str();
}

void check_matrix_upper_triangular(Suite& s, Check& c) {
  struct Family {
    SpecPtr spec;
    std::vector<const char*> witnesses;
  } families[] = {
      {s.groups[0], {"a:1"}},
      {s.groups[2], {"u:1", "v:1"}},
      {make_z2z3z5(), {"u:1", "v:1", "w:1"}},
  };
  for (const auto& fam : families) {
    std::vector<GroupElement> ws;
    for (const char* w : fam.witnesses) ws.push_back(GroupElement::parse(fam.spec, w));
    TraceMatrix m = trace_matrix(fam.spec, ws);
    const std::size_t n = m.dimension();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i > j && j >= 1 && !m.entries[i][j].is_zero()) {
          c.passed = false;
          c.detail = "A[" + std::to_string(i) + "][" + std::to_string(j) + "] != 0";
          return;
        }
      }
    }
    for (std::size_t j = 1; j < n; ++j) {
      const Rational expected(1, static_cast<std::int64_t>(m.witnesses[j - 1].second));
      if (!(m.entries[0][j] == expected)) {
        c.passed = false;
        c.detail = "delta row entry A[0][" + std::to_string(j) + "] != 1/d";
        return;
      }
      if (m.entries[j][j] < expected) {
        c.passed = false;
        c.detail = "diagonal entry below 1/d at j=" + std::to_string(j);
        return;
      }
      if (!m.entries[j][0].is_zero()) {
        c.passed = false;
        c.detail = "column 0 entry A[" + std::to_string(j) + "][0] != 0";
        return;
      }
    }
  }
  c.detail = "families=3 (orders {2}, {2,3}, {2,3,5})";
}

void check_determinant_cofactor_agreement(Suite& s, Check& c) {
  struct Family {
    SpecPtr spec;
    std::vector<const char*> witnesses;
  } families[] = {
      {s.groups[0], {"a:1"}},
      {s.groups[2], {"v:1", "u:1"}},
      {make_z2z3z5(), {"w:1", "u:1", "v:1"}},
  };
  for (const auto& fam : families) {
    std::vector<GroupElement> ws;
    for (const char* w : fam.witnesses) ws.push_back(GroupElement::parse(fam.spec, w));
    TraceMatrix m = trace_matrix(fam.spec, ws);
    Rational diag(1);
    for (std::size_t i = 0; i < m.dimension(); ++i) diag *= m.entries[i][i];
    Rational cof = cofactor_determinant(m.entries);
    if (!(m.determinant == cof) || !(m.determinant == diag)) {
      c.passed = false;
      c.detail = "determinant, cofactor expansion and diagonal product disagree";
      return;
    }
  }
  c.detail = "families=3";
}

void check_rd_inequality(Suite& s, Check& c) {
  struct Case {
    SpecPtr spec;
    const char* rep;
  } cases[] = {{s.groups[0], "a:1"}, {s.groups[1], "x:1"}, {s.groups[2], "v:1"}};
  std::size_t total = 0;
  for (const auto& [spec, rep_word] : cases) {
    GroupElement rep = GroupElement::parse(spec, rep_word);
    ConjugacyProfile profile = conjugacy_shell_counts(rep, 13);
    for (unsigned i = 0; i < 200 * s.options.scale; ++i) {
      AlgebraElement::ExactTerms terms;
      const std::size_t n = 1 + s.rng.below(12);
      for (std::size_t k = 0; k < n; ++k) {
        GroupElement w = random_element(s.rng, spec, 4, 3);
        GroupElement h = rep.conjugated_by(w);
        if (h.length() > 13) continue;
        terms.emplace(h, random_rational(s.rng));
      }
      AlgebraElement a = AlgebraElement::from_exact_terms(spec, std::move(terms));
      InequalityCheck res = check_rd_poly_inequality(a, rep, profile);
      if (!res.holds) {
        c.passed = false;
        c.detail = "inequality violated on a random element of C(" + std::string(rep_word) + ")";
        return;
      }
      ++total;
    }
  }
  c.detail = "cases=" + std::to_string(total);
}

void check_norm_path_equivalence(Suite& s, Check& c) {
  struct Case {
    SpecPtr spec;
    const char* rep;
    std::vector<std::uint32_t> shells;
    double sobolev_s;
  } cases[] = {
      {s.groups[0], "a:1", {1, 5, 9}, 2.0},
      {s.groups[1], "x:1", {1, 3, 5}, 1.5},
  };
  for (const auto& [spec, rep_word, shells, sob] : cases) {
    GroupElement rep = GroupElement::parse(spec, rep_word);
    ConjugacyProfile profile = conjugacy_shell_counts(rep, shells.back());
    ShellSchedule schedule;
    schedule.exponent_base = 4.0;
    for (std::uint32_t l : shells) {
      schedule.indices.push_back(l);
      schedule.counts.push_back(profile.count(l));
    }
    DivergenceReport report =
        counterexample_partial_sums(profile, schedule, sob, shells.size(), 1e6);
    AlgebraElement x_n = materialize_counterexample(rep, schedule, shells.size(), 1000);
    const double norm_sq = std::pow(sobolev_norm(x_n, {sob}), 2.0);
    const double expected = report.norm_partials.back();
    if (std::abs(norm_sq - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
      c.passed = false;
      c.detail = std::string("materialized norm disagrees with shell partial sum for C(") +
                 rep_word + ")";
      return;
    }
  }
  c.detail = "classes=2";
}

void check_trace_partials_divergence(Suite& s, Check& c) {
  (void)s;
  ConjugacyProfile profile = synthetic_profile(parse_synthetic("2^l"), 200);
  ShellSchedule schedule = find_shell_sequence(profile, 4.0, 5);
  DivergenceReport report = counterexample_partial_sums(profile, schedule, 3.0, 5, 1e6);
  const double floor_increment = std::exp2(0.375 * schedule.counts.front().log2());
  double prev = 0.0;
  for (std::size_t i = 0; i < report.trace_partials.size(); ++i) {
    const double inc = report.trace_partials[i] - prev;
    if (report.trace_partials[i] <= prev || inc < floor_increment * (1.0 - 1e-12) || inc <= 1.0) {
      c.passed = false;
      c.detail = "trace partial sums are not strictly increasing by > 1 per term";
      return;
    }
    prev = report.trace_partials[i];
  }
  if (!report.threshold_reached) {
    c.passed = false;
    c.detail = "trace partials never passed the 1e6 threshold";
    return;
  }
  c.detail = "threshold 1e6 passed at term " + std::to_string(report.threshold_term);
}

}  // namespace

VerifyResult run_verification(const VerifyOptions& options) {
  Suite suite(options);
  struct Entry {
    const char* name;
    void (*fn)(Suite&, Check&);
  };
  const Entry entries[] = {
      {"group.normal_form_uniqueness", check_normal_form_uniqueness},
      {"group.length_axioms", check_length_axioms},
      {"group.conjugacy_matches_brute_force", check_conjugacy_brute_force},
      {"group.order_conjugation_invariant", check_order_conjugation_invariant},
      {"algebra.idempotency_exact", check_idempotency},
      {"algebra.delta_trace_commutator", check_delta_commutator},
      {"algebra.sobolev_monotonicity", check_sobolev_monotonicity},
      {"algebra.augmentation_homomorphism", check_augmentation_homomorphism},
      {"growth.profile_worker_determinism", check_worker_determinism},
      {"growth.closed_form_matches_enumeration", check_closed_form_matches_enumeration},
      {"growth.profile_conjugation_invariant", check_profile_conjugation_invariant},
      {"growth.schedule_reverification", check_schedule_reverification},
      {"traces.matrix_upper_triangular", check_matrix_upper_triangular},
      {"traces.determinant_cofactor_agreement", check_determinant_cofactor_agreement},
      {"traces.rd_inequality_property", check_rd_inequality},
      {"traces.norm_path_equivalence", check_norm_path_equivalence},
      {"traces.trace_partials_divergence", check_trace_partials_divergence},
  };

  std::ostringstream out;
  out << "tracesep verify transcript\n";
  out << "tool_version = " << kToolVersion << "\n";
  out << "seed = " << options.seed << "\n";
  out << "workers = " << options.workers << "\n";
  out << "scale = " << options.scale << "\n";

  std::size_t failures = 0;
  for (const Entry& entry : entries) {
    Check check;
    check.name = entry.name;
    try {
      entry.fn(suite, check);
    } catch (const std::exception& e) {
      check.passed = false;
      check.detail = std::string("exception: ") + e.what();
    }
    if (!check.passed) ++failures;
    out << (check.passed ? "PASS " : "FAIL ") << check.name;
    if (!check.detail.empty()) out << " (" << check.detail << ")";
    out << "\n";
  }
  out << "checks = " << std::size(entries) << "\n";
  out << "failures = " << failures << "\n";
  out << "result = " << (failures == 0 ? "PASS" : "FAIL") << "\n";

  VerifyResult result;
  result.passed = failures == 0;
  result.transcript = out.str();
  return result;
}

}  // namespace tracesep
