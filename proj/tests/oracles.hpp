#pragma once

// Independent oracles for the test suites. Everything here recomputes
// results along a different path from the library implementation:
// recursive generation instead of BFS, rewrite-until-fixpoint reduction
// instead of the stack reducer, brute-force conjugation instead of
// cyclic-reduction comparison, cofactor expansion instead of Bareiss.

#include <unordered_set>
#include <vector>

#include "tracesep/group.hpp"
#include "tracesep/rational.hpp"

namespace oracles {

using namespace tracesep;

inline SpecPtr dinf() { return GroupSpec::make({CyclicFactor{2, "a"}, CyclicFactor{2, "b"}}); }
inline SpecPtr z3z() { return GroupSpec::make({CyclicFactor{3, "x"}, CyclicFactor{0, "y"}}); }
inline SpecPtr z2z3() { return GroupSpec::make({CyclicFactor{2, "u"}, CyclicFactor{3, "v"}}); }

inline GroupElement el(const SpecPtr& spec, const char* word) {
  return GroupElement::parse(spec, word);
}

/// Free reduction by rescanning from scratch after every rewrite.
inline std::vector<Syllable> rewrite_reduce(const GroupSpec& spec, std::vector<Syllable> word) {
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

/// All normal forms of length <= budget by recursive syllable composition
/// (never touches the reducer or the BFS enumerator).
inline void ball_rec(const SpecPtr& spec, std::uint32_t budget, int last_factor,
                     std::vector<Syllable>& current, std::vector<GroupElement>& out) {
  out.push_back(GroupElement::reduce(spec, current));
  for (std::uint32_t j = 0; j < spec->factor_count(); ++j) {
    if (static_cast<int>(j) == last_factor) continue;
    const std::uint64_t d = spec->factor(j).order;
    if (d == 0) {
      for (std::uint32_t t = 1; t <= budget; ++t) {
        for (std::int64_t e : {static_cast<std::int64_t>(t), -static_cast<std::int64_t>(t)}) {
          current.push_back(Syllable{j, e});
          ball_rec(spec, budget - t, static_cast<int>(j), current, out);
          current.pop_back();
        }
      }
    } else {
      for (std::uint64_t e = 1; e < d; ++e) {
        const std::uint64_t t = std::min(e, d - e);
        if (t > budget) continue;
        current.push_back(Syllable{j, static_cast<std::int64_t>(e)});
        ball_rec(spec, budget - static_cast<std::uint32_t>(t), static_cast<int>(j), current, out);
        current.pop_back();
      }
    }
  }
}

inline std::vector<GroupElement> recursive_ball(const SpecPtr& spec, std::uint32_t radius) {
  std::vector<Syllable> current;
  std::vector<GroupElement> out;
  ball_rec(spec, radius, -1, current, out);
  return out;
}

/// {w a w^-1 : l(w) <= conj_radius}, using only multiply and inverse.
inline std::unordered_set<GroupElement, ElementHash> brute_conjugates(
    const GroupElement& a, const std::vector<GroupElement>& conjugators) {
  std::unordered_set<GroupElement, ElementHash> out;
  for (const GroupElement& w : conjugators) out.insert(w.times(a).times(w.inverse()));
  return out;
}

inline Rational cofactor_det(const std::vector<std::vector<Rational>>& m) {
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
    det += Rational(sign) * m[0][j] * cofactor_det(minor);
    sign = -sign;
  }
  return det;
}

/// Exponent-sum word length (counts x^2 in Z/3 as 2, not 1). Kept as a
/// second bookkeeping convention for the growth fixtures.
inline std::uint64_t exponent_sum_length(const GroupElement& g) {
  std::uint64_t total = 0;
  for (const Syllable& s : g.syllables())
    total += static_cast<std::uint64_t>(s.exponent < 0 ? -s.exponent : s.exponent);
  return total;
}

}  // namespace oracles
