#include "tracesep/traces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_set>

#include "tracesep/errors.hpp"

namespace tracesep {

namespace {

using i128 = __int128;

i128 iabs128(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
  a = iabs128(a);
  b = iabs128(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

i128 checked_mul(i128 a, i128 b) {
  if (a == 0 || b == 0) return 0;
  static const i128 lim = static_cast<i128>((~static_cast<unsigned __int128>(0)) >> 1);
  if (iabs128(a) > lim / iabs128(b))
    throw Overflow("determinant elimination exceeded 128-bit range");
  return a * b;
}

Rational rational_from_i128(i128 num, i128 den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num == 0) return Rational(0);
  const i128 g = gcd128(num, den);
  num /= g;
  den /= g;
  if (num > i128(INT64_MAX) || num < i128(INT64_MIN) || den > i128(INT64_MAX))
    throw Overflow("determinant does not fit a 64-bit rational");
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

double nth_power(double base, double exponent) { return std::pow(base, exponent); }

}  // namespace

Rational conjugacy_trace(const GroupElement& class_rep, const AlgebraElement& a) {
  if (class_rep.spec().get() != a.spec().get() && !class_rep.spec()->same_group(*a.spec()))
    throw MixedSpecs("class representative and algebra element come from different specs");
  Rational sum(0);
  for (const auto& [g, c] : a.exact_terms())
    if (g.conjugate_to(class_rep)) sum += c;
  return sum;
}

double conjugacy_trace_value(const GroupElement& class_rep, const AlgebraElement& a) {
  if (class_rep.spec().get() != a.spec().get() && !class_rep.spec()->same_group(*a.spec()))
    throw MixedSpecs("class representative and algebra element come from different specs");
  if (a.mode() == CoeffMode::exact) return conjugacy_trace(class_rep, a).to_double();
  double sum = 0.0;
  for (const auto& [g, c] : a.float_terms())
    if (g.conjugate_to(class_rep)) sum += c;
  return sum;
}

Rational matrix_determinant(const std::vector<std::vector<Rational>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return Rational(1);
  // Clear denominators row by row, then run fraction-free Bareiss
  // elimination over 128-bit integers.
  std::vector<std::vector<i128>> a(n, std::vector<i128>(n));
  i128 scale = 1;
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t row_den = 1;
    for (std::size_t j = 0; j < n; ++j)
      row_den = std::lcm(row_den, m[i][j].denominator());
    scale = checked_mul(scale, i128(row_den));
    for (std::size_t j = 0; j < n; ++j)
      a[i][j] = i128(m[i][j].numerator()) * (row_den / m[i][j].denominator());
  }

  int sign = 1;
  i128 prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t pivot = k + 1;
      while (pivot < n && a[pivot][k] == 0) ++pivot;
      if (pivot == n) return Rational(0);
      std::swap(a[k], a[pivot]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (checked_mul(a[k][k], a[i][j]) - checked_mul(a[i][k], a[k][j])) / prev;
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return rational_from_i128(sign * a[n - 1][n - 1], scale);
}

TraceMatrix trace_matrix(SpecPtr spec, std::span<const GroupElement> witnesses) {
  std::vector<std::pair<GroupElement, std::uint64_t>> sorted;
  for (const GroupElement& g : witnesses) {
    Order o = g.order();
    if (!o.is_finite())
      throw InfiniteOrder("trace matrix witness '" + g.word() + "' has infinite order");
    if (o.value() < 2)
      throw InvalidWitness("trace matrix witness '" + g.word() + "' must have order >= 2");
    sorted.emplace_back(g, o.value());
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    if (sorted[i].second == sorted[i + 1].second)
      throw DuplicateOrders("witnesses '" + sorted[i].first.word() + "' and '" +
                            sorted[i + 1].first.word() + "' share order " +
                            std::to_string(sorted[i].second) +
                            "; the distinct-orders hypothesis is violated");
  }

  const std::size_t k = sorted.size();
  TraceMatrix out;
  out.witnesses = sorted;
  out.entries.assign(k + 1, std::vector<Rational>(k + 1, Rational(0)));

  std::vector<AlgebraElement> idempotents;
  idempotents.push_back(AlgebraElement::term(GroupElement::identity(spec), Rational(1)));
  for (const auto& [g, d] : sorted) idempotents.push_back(build_idempotent(g));

  for (std::size_t j = 0; j <= k; ++j) out.entries[0][j] = delta_trace(idempotents[j]);
  for (std::size_t i = 1; i <= k; ++i)
    for (std::size_t j = 0; j <= k; ++j)
      out.entries[i][j] = conjugacy_trace(sorted[i - 1].first, idempotents[j]);

  out.determinant = matrix_determinant(out.entries);
  out.verdict = out.determinant.is_zero() ? TraceMatrix::Verdict::not_shown
                                          : TraceMatrix::Verdict::separable;
  return out;
}

InequalityCheck check_rd_poly_inequality(const AlgebraElement& a, const GroupElement& class_rep,
                                         const ConjugacyProfile& profile) {
  if (class_rep.is_identity())
    throw ProfileMismatch("the inequality excludes the identity class (shells need l >= 1)");

  // Per-shell coefficient sums and square sums over the supported class
  // elements.
  std::map<std::uint32_t, double> sq_by_shell;
  double class_sum = 0.0;
  auto visit = [&](const GroupElement& g, double c) {
    if (!g.conjugate_to(class_rep))
      throw ProfileMismatch("support element '" + g.word() + "' is not in the class of '" +
                            class_rep.word() + "'");
    const std::uint32_t l = static_cast<std::uint32_t>(g.length());
    if (l > profile.radius())
      throw ProfileMismatch("support reaches length " + std::to_string(l) +
                            " beyond the profile radius " + std::to_string(profile.radius()));
    class_sum += c;
    sq_by_shell[l] += c * c;
  };
  if (a.mode() == CoeffMode::exact) {
    for (const auto& [g, c] : a.exact_terms()) visit(g, c.to_double());
  } else {
    for (const auto& [g, c] : a.float_terms()) visit(g, c);
  }

  InequalityCheck out;
  out.lhs = std::abs(class_sum);
  double inner = 0.0;
  for (const auto& [l, sq] : sq_by_shell) {
    const double n_l = profile.count(l).to_double();
    inner += n_l * sq * static_cast<double>(l) * static_cast<double>(l);
  }
  const double pi_over_sqrt6 = 3.14159265358979323846 / std::sqrt(6.0);
  out.rhs = pi_over_sqrt6 * std::sqrt(inner);
  out.holds = out.lhs <= out.rhs * (1.0 + 1e-9);
  return out;
}

DivergenceReport counterexample_partial_sums(const ConjugacyProfile& profile,
                                             const ShellSchedule& schedule, double sobolev_s,
                                             std::size_t terms, double trace_threshold) {
  if (terms < 1) throw InvalidParameter("partial sums need terms >= 1");
  if (sobolev_s < 0.0) throw InvalidParameter("sobolev exponent s must be >= 0");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (i > 0 && schedule.indices[i] <= schedule.indices[i - 1])
      throw ScheduleInvalid("schedule indices are not strictly increasing");
    if (schedule.indices[i] > profile.radius())
      throw ScheduleInvalid("schedule index " + std::to_string(schedule.indices[i]) +
                            " is outside the profile radius " + std::to_string(profile.radius()));
    if (profile.count(schedule.indices[i]) != schedule.counts[i])
      throw ScheduleInvalid("schedule count at shell " + std::to_string(schedule.indices[i]) +
                            " does not match the profile");
  }

  DivergenceReport report;
  report.sobolev_s = sobolev_s;
  report.exponent_base = schedule.exponent_base;
  report.trace_threshold = trace_threshold;
  report.provenance = profile.provenance();
  report.provenance_detail = profile.provenance_detail();

  const std::size_t used = std::min(terms, schedule.size());
  double norm_sum = 0.0, trace_sum = 0.0;
  for (std::size_t i = 0; i < used; ++i) {
    const std::uint32_t l = schedule.indices[i];
    const double log2n = schedule.counts[i].log2();
    const double norm_term = std::exp2(-0.25 * log2n) * nth_power(1.0 + l, 2.0 * sobolev_s);
    const double trace_term = std::exp2(0.375 * log2n);
    norm_sum += norm_term;
    trace_sum += trace_term;
    report.shell_indices.push_back(l);
    report.shell_counts.push_back(schedule.counts[i]);
    report.norm_partials.push_back(norm_sum);
    report.trace_partials.push_back(trace_sum);
    if (!report.threshold_reached && trace_sum >= trace_threshold) {
      report.threshold_reached = true;
      report.threshold_term = i + 1;
    }
  }

  if (report.shell_indices.empty()) {
    report.norm_tail_bound = std::numeric_limits<double>::quiet_NaN();
    return report;
  }

  // Tail of the squared-norm series, assuming the schedule keeps its
  // defining inequality: term i < (1+l_i)^(2s - c*i/4), and 1+l_i only
  // grows past M = 2 + l_last, so the tail is dominated by the geometric
  // series in M^(-c/4).
  const double m_base = 2.0 + static_cast<double>(report.shell_indices.back());
  const double c = schedule.exponent_base;
  const double first_exp = 2.0 * sobolev_s - c * static_cast<double>(used + 1) / 4.0;
  const double ratio = nth_power(m_base, -c / 4.0);
  report.norm_tail_bound = nth_power(m_base, first_exp) / (1.0 - ratio);
  return report;
}

AlgebraElement materialize_counterexample(const GroupElement& class_rep,
                                          const ShellSchedule& schedule, std::size_t shells,
                                          std::uint64_t per_shell_cap,
                                          const EnumerationLimits& limits) {
  if (shells > schedule.size())
    throw ScheduleInvalid("asked for " + std::to_string(shells) + " shells, schedule has " +
                          std::to_string(schedule.size()));
  if (shells == 0) return AlgebraElement::zero(class_rep.spec(), CoeffMode::floating);

  const std::uint32_t max_l = schedule.indices[shells - 1];
  auto [core, conj] = class_rep.cyclic_reduction();
  std::vector<GroupElement> ball =
      enumerate_ball(class_rep.spec(), conjugator_ball_radius(core, max_l), limits);

  std::unordered_set<GroupElement, ElementHash> distinct;
  for (const GroupElement& w : ball) {
    GroupElement c = core.conjugated_by(w);
    if (c.length() <= max_l) distinct.insert(std::move(c));
  }

  std::map<std::uint32_t, std::size_t> shell_of;  // length -> schedule position
  std::vector<double> shell_coeff(shells);
  for (std::size_t i = 0; i < shells; ++i) {
    shell_of.emplace(schedule.indices[i], i);
    shell_coeff[i] = std::exp2(-0.625 * schedule.counts[i].log2());
  }

  AlgebraElement::FloatTerms terms;
  std::vector<std::uint64_t> shell_sizes(shells, 0);
  for (const GroupElement& el : distinct) {
    auto it = shell_of.find(static_cast<std::uint32_t>(el.length()));
    if (it == shell_of.end()) continue;
    ++shell_sizes[it->second];
    terms.emplace(el, shell_coeff[it->second]);
  }
  for (std::size_t i = 0; i < shells; ++i) {
    if (shell_sizes[i] > per_shell_cap)
      throw ResourceLimit("shell " + std::to_string(schedule.indices[i]) + " holds " +
                          std::to_string(shell_sizes[i]) + " elements, over the cap of " +
                          std::to_string(per_shell_cap));
    if (BigNat(shell_sizes[i]) != schedule.counts[i])
      throw ScheduleInvalid("enumerated shell " + std::to_string(schedule.indices[i]) + " has " +
                            std::to_string(shell_sizes[i]) +
                            " elements but the schedule recorded " +
                            schedule.counts[i].to_string());
  }
  return AlgebraElement::from_float_terms(class_rep.spec(), std::move(terms));
}

std::string separability_verdict_label(SeparabilityReport::Verdict v) {
  switch (v) {
    case SeparabilityReport::Verdict::separable_by_traces:
      return "SEPARABLE_BY_TRACES";
    case SeparabilityReport::Verdict::trace_obstruction_evidence:
      return "TRACE_OBSTRUCTION_EVIDENCE";
    case SeparabilityReport::Verdict::mixed_inconclusive:
      return "MIXED_INCONCLUSIVE";
  }
  return "UNKNOWN";
}

SeparabilityReport separability_report(SpecPtr spec, std::span<const GroupElement> witnesses,
                                       const SeparabilityOptions& options) {
  SeparabilityReport report;
  report.spec = spec;
  report.options = options;

  bool all_polynomial = true;
  bool all_obstructed = true;
  for (const GroupElement& g : witnesses) {
    Order o = g.order();
    if (!o.is_finite())
      throw InfiniteOrder("witness '" + g.word() + "' has infinite order");
    if (o.value() < 2) throw InvalidWitness("witness '" + g.word() + "' must have order >= 2");

    WitnessEvidence ev{g, o.value(), {}, true};
    // Obstruction evidence must cover every power g^t, 0 < t < d; a
    // single slow-growing power class would leave a separating trace.
    for (std::uint64_t t = 1; t < ev.order; ++t) {
      GroupElement rep = g.pow(t);
      ConjugacyProfile profile = profile_from_formula(rep, options.radius, options.limits);
      ClassEvidence ce{rep,
                       static_cast<std::uint32_t>(t),
                       classify_growth(profile),
                       profile.provenance(),
                       profile.provenance_detail(),
                       profile.radius(),
                       std::nullopt,
                       std::nullopt};
      if (ce.growth.kind == GrowthVerdict::Kind::superpolynomial_evidence) {
        all_polynomial = false;
        ShellSchedule schedule =
            find_shell_sequence(profile, options.exponent_base, options.schedule_terms);
        if (schedule.empty()) {
          ev.obstruction_shown = false;
        } else {
          ce.divergence = counterexample_partial_sums(profile, schedule, options.sobolev_s,
                                                      options.schedule_terms,
                                                      options.trace_threshold);
        }
        ce.schedule = std::move(schedule);
      } else {
        ev.obstruction_shown = false;
        if (ce.growth.kind == GrowthVerdict::Kind::inconclusive) all_polynomial = false;
      }
      ev.classes.push_back(std::move(ce));
    }
    all_obstructed = all_obstructed && ev.obstruction_shown;
    report.witnesses.push_back(std::move(ev));
  }

  if (all_polynomial) {
    std::vector<GroupElement> ws;
    for (const GroupElement& g : witnesses) ws.push_back(g);
    report.matrix = trace_matrix(spec, ws);
    report.verdict = report.matrix->verdict == TraceMatrix::Verdict::separable
                         ? SeparabilityReport::Verdict::separable_by_traces
                         : SeparabilityReport::Verdict::mixed_inconclusive;
  } else if (!witnesses.empty() && all_obstructed) {
    report.verdict = SeparabilityReport::Verdict::trace_obstruction_evidence;
  } else {
    report.verdict = SeparabilityReport::Verdict::mixed_inconclusive;
  }
  return report;
}

}  // namespace tracesep
