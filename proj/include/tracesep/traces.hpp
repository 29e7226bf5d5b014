#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tracesep/algebra.hpp"
#include "tracesep/group.hpp"
#include "tracesep/growth.hpp"

namespace tracesep {

/// Class trace tau_g: the sum of coefficients over the conjugacy class of
/// class_rep. Exact on exact elements (ModeMismatch on floats).
Rational conjugacy_trace(const GroupElement& class_rep, const AlgebraElement& a);
double conjugacy_trace_value(const GroupElement& class_rep, const AlgebraElement& a);

/**
 * The separability certificate: witnesses g_1..g_k of distinct finite
 * orders sorted ascending, idempotents p_j, entries A_ij = tau_i(p_j)
 * with row 0 the delta trace. Exact rationals end to end; SEPARABLE
 * means the determinant is provably nonzero, NOT_SHOWN means this trace
 * family proves nothing (which is weaker than linear dependence).
 */
struct TraceMatrix {
  std::vector<std::pair<GroupElement, std::uint64_t>> witnesses;  // (element, order)
  std::vector<std::vector<Rational>> entries;                     // (k+1) x (k+1)
  Rational determinant;
  enum class Verdict { separable, not_shown } verdict = Verdict::not_shown;

  std::size_t dimension() const { return entries.size(); }
};

/// Throws InfiniteOrder for non-torsion witnesses, InvalidWitness for
/// order < 2, DuplicateOrders when the distinct-orders hypothesis fails.
TraceMatrix trace_matrix(SpecPtr spec, std::span<const GroupElement> witnesses);

/// Exact determinant by fraction-free (Bareiss) elimination after
/// clearing denominators.
Rational matrix_determinant(const std::vector<std::vector<Rational>>& m);

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;  // includes the pi/sqrt(6) constant
  bool holds = false;
};

/**
 * The trace-extension inequality for one class: lhs = |sum of class
 * coefficients|, rhs = (pi/sqrt 6) * sqrt(sum_l n_l (sum_{l(h)=l} c_h^2) l^2).
 * The support must sit inside C(class_rep) on shells the profile covers,
 * with l >= 1 (so class_rep != e). Throws ProfileMismatch otherwise.
 */
InequalityCheck check_rd_poly_inequality(const AlgebraElement& a, const GroupElement& class_rep,
                                         const ConjugacyProfile& profile);

/**
 * Partial sums of the no-bounded-trace counterexample, computed from
 * shell data alone: squared-norm terms n^(-1/4) (1+l)^(2s) and trace
 * terms n^(3/8) over the schedule shells.
 */
struct DivergenceReport {
  std::vector<std::uint32_t> shell_indices;
  std::vector<BigNat> shell_counts;
  double sobolev_s = 0.0;
  double exponent_base = 4.0;
  std::vector<double> norm_partials;   // partial sums of squared-norm terms
  std::vector<double> trace_partials;  // partial sums of trace terms
  double norm_tail_bound = 0.0;        // NaN when no terms were computed
  double trace_threshold = 0.0;
  bool threshold_reached = false;
  std::size_t threshold_term = 0;  // 1-based term where it was passed
  Provenance provenance = Provenance::synthetic;
  std::string provenance_detail;
};

/// Throws ScheduleInvalid when the schedule does not match the profile
/// (indices not increasing, out of range, or counts differing).
DivergenceReport counterexample_partial_sums(const ConjugacyProfile& profile,
                                             const ShellSchedule& schedule, double sobolev_s,
                                             std::size_t terms, double trace_threshold);

/**
 * The truncation x_N: coefficient n_{l(h)}^(-5/8) on every class element
 * in the first N schedule shells. Floating mode. Enumerates the shells,
 * so they must be within honest reach; throws ResourceLimit when a shell
 * exceeds per_shell_cap and ScheduleInvalid when the enumerated shell
 * size disagrees with the schedule count.
 */
AlgebraElement materialize_counterexample(const GroupElement& class_rep,
                                          const ShellSchedule& schedule, std::size_t shells,
                                          std::uint64_t per_shell_cap,
                                          const EnumerationLimits& limits = {});

struct ClassEvidence {
  GroupElement representative;
  std::uint32_t power = 1;
  GrowthVerdict growth;
  Provenance provenance = Provenance::closed_form;
  std::string provenance_detail;
  std::uint32_t profile_radius = 0;
  std::optional<ShellSchedule> schedule;
  std::optional<DivergenceReport> divergence;
};

struct WitnessEvidence {
  GroupElement witness;
  std::uint64_t order = 0;
  std::vector<ClassEvidence> classes;  // one per power 0 < t < order
  bool obstruction_shown = false;      // every power superpolynomial with a schedule
};

struct SeparabilityOptions {
  std::uint32_t radius = 240;
  double sobolev_s = 3.0;
  double exponent_base = 4.0;
  std::size_t schedule_terms = 8;
  double trace_threshold = 1e6;
  EnumerationLimits limits{};
};

struct SeparabilityReport {
  enum class Verdict { separable_by_traces, trace_obstruction_evidence, mixed_inconclusive };
  SpecPtr spec;
  SeparabilityOptions options;
  std::vector<WitnessEvidence> witnesses;
  std::optional<TraceMatrix> matrix;
  Verdict verdict = Verdict::mixed_inconclusive;
};

std::string separability_verdict_label(SeparabilityReport::Verdict v);

/**
 * The composite judgment: per-witness growth verdicts over every power
 * 0 < t < d, the exact trace matrix when all classes are polynomially
 * bounded, divergence evidence for every superpolynomial class.
 */
SeparabilityReport separability_report(SpecPtr spec, std::span<const GroupElement> witnesses,
                                       const SeparabilityOptions& options = {});

}  // namespace tracesep
