#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tracesep/bignat.hpp"
#include "tracesep/group.hpp"

namespace tracesep {

struct EnumerationLimits {
  std::uint64_t max_elements = 4'000'000;  // cap on any single enumeration
  unsigned workers = 1;                    // conjugation fan-out threads
};

/// Saturating count of the ball of the given radius (exact while it fits).
std::uint64_t ball_size_bound(const GroupSpec& spec, std::uint32_t radius);

/// Conjugator-ball radius sufficient to hit every element of C(core) of
/// length <= radius, for core already cyclically reduced.
std::uint32_t conjugator_ball_radius(const GroupElement& core, std::uint32_t radius);

/// Every element of length <= radius, ordered by (length, serialized word).
/// Throws ResourceLimit when the projected count exceeds the cap.
std::vector<GroupElement> enumerate_ball(SpecPtr spec, std::uint32_t radius,
                                         const EnumerationLimits& limits = {});

enum class Provenance { enumerated, closed_form, synthetic };

std::string provenance_label(Provenance p, const std::string& detail);

/**
 * Shell counts n_l = |{h in C(rep) : l(h) = l}| for one conjugacy class,
 * indexed by length 0..radius, with the provenance that produced them.
 */
class ConjugacyProfile {
 public:
  ConjugacyProfile(std::optional<GroupElement> rep, std::string rep_word,
                   std::string spec_hash, std::vector<BigNat> counts,
                   Provenance prov, std::string detail);

  std::uint32_t radius() const { return static_cast<std::uint32_t>(counts_.size() - 1); }
  const BigNat& count(std::uint32_t l) const;
  const std::vector<BigNat>& counts() const { return counts_; }

  const std::optional<GroupElement>& representative() const { return rep_; }
  const std::string& representative_word() const { return rep_word_; }
  const std::string& spec_hash() const { return spec_hash_; }
  Provenance provenance() const { return prov_; }
  const std::string& provenance_detail() const { return detail_; }

  std::size_t nonzero_shells() const;
  BigNat cumulative(std::uint32_t l) const;

  /// Same counts, truncated to a smaller radius.
  ConjugacyProfile truncated(std::uint32_t radius) const;

  bool operator==(const ConjugacyProfile& o) const;

 private:
  std::optional<GroupElement> rep_;
  std::string rep_word_;
  std::string spec_hash_;
  std::vector<BigNat> counts_;
  Provenance prov_;
  std::string detail_;
};

/**
 * Exact shell counts of C(g) up to the given radius, by enumerating a
 * conjugator ball rather than the whole length-<=radius ball: the
 * conjugator radius needed is roughly half the profile radius.
 */
ConjugacyProfile conjugacy_shell_counts(const GroupElement& g, std::uint32_t radius,
                                        const EnumerationLimits& limits = {});

/**
 * Closed-form shell counts for the class of a torsion element whose
 * cyclically reduced core is a single syllable in a finite factor.
 * Counts reduced conjugating words by a transfer recurrence; before the
 * profile is returned it is checked shell-by-shell against the
 * enumerated profile on lengths <= 15 (UnsupportedClass for other
 * cores, Error if the mandatory cross-check ever disagrees).
 */
ConjugacyProfile profile_from_formula(const GroupElement& g, std::uint32_t max_length,
                                      const EnumerationLimits& limits = {});

struct SyntheticSpec {
  enum class Kind { exponential, polynomial, constant } kind;
  std::uint64_t value = 0;
  std::string text;
};

/// Grammar: "<base>^l" | "l^<k>" | "<constant>".
SyntheticSpec parse_synthetic(std::string_view text);

ConjugacyProfile synthetic_profile(const SyntheticSpec& spec, std::uint32_t max_length);

struct GrowthVerdict {
  enum class Kind { polynomial_bounded, superpolynomial_evidence, inconclusive } kind;
  double fitted_degree = 0.0;  // slope of the log-log fit
  double fit_quality = 0.0;    // R^2 of the winning model, clamped to [0,1]
  std::uint32_t data_radius = 0;
};

std::string growth_kind_label(GrowthVerdict::Kind kind);

/**
 * Least-squares comparison of a polynomial model (log cumulative count
 * against log l) and an exponential model (log cumulative count against
 * l) over the nonzero cumulative data. A heuristic over finite data,
 * never a proof: INCONCLUSIVE when the residuals are within 10% of each
 * other. Throws InsufficientData below 8 nonzero shells.
 */
GrowthVerdict classify_growth(const ConjugacyProfile& profile);

/**
 * Increasing lengths l_1 < l_2 < ... with n_{l_i} > (1+l_i)^(c*i),
 * selected greedily smallest-first. The counts at the chosen indices are
 * carried along for downstream partial sums.
 */
struct ShellSchedule {
  std::vector<std::uint32_t> indices;
  std::vector<BigNat> counts;
  double exponent_base = 4.0;

  std::size_t size() const { return indices.size(); }
  bool empty() const { return indices.empty(); }
};

ShellSchedule find_shell_sequence(const ConjugacyProfile& profile, double exponent_base,
                                  std::size_t max_terms);

/// Does n exceed (1+l)^exponent? Exact when the exponent is integral,
/// log-space binary64 otherwise.
bool count_exceeds_power(const BigNat& n, std::uint32_t l, double exponent);

/// CSV form: provenance comment, "l,count" header, one row per length.
std::string profile_to_csv(const ConjugacyProfile& profile);
ConjugacyProfile profile_from_csv(std::string_view csv);

}  // namespace tracesep
