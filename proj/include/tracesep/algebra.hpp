#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "tracesep/group.hpp"
#include "tracesep/rational.hpp"

namespace tracesep {

enum class CoeffMode { exact, floating };

/**
 * Finitely supported element of the group algebra. Coefficients are
 * either exact rationals or binary64, chosen at construction; everything
 * feeding the trace matrix runs exact, the counterexample paths run
 * floating because the n^(-5/8) coefficients are irrational.
 *
 * Zero coefficients are never stored. Immutable after construction.
 */
class AlgebraElement {
 public:
  using ExactTerms = std::map<GroupElement, Rational, ElementKeyLess>;
  using FloatTerms = std::map<GroupElement, double, ElementKeyLess>;

  static AlgebraElement zero(SpecPtr spec, CoeffMode mode);
  static AlgebraElement term(const GroupElement& g, const Rational& coeff);
  static AlgebraElement term(const GroupElement& g, double coeff);
  static AlgebraElement from_exact_terms(SpecPtr spec, ExactTerms terms);
  static AlgebraElement from_float_terms(SpecPtr spec, FloatTerms terms);

  CoeffMode mode() const { return mode_; }
  const SpecPtr& spec() const { return spec_; }
  std::size_t support_size() const;
  bool is_zero() const { return support_size() == 0; }

  const ExactTerms& exact_terms() const;  // ModeMismatch on a floating element
  const FloatTerms& float_terms() const;  // ModeMismatch on an exact element

  Rational exact_coefficient(const GroupElement& g) const;  // 0 when absent
  double coefficient_value(const GroupElement& g) const;    // either mode

  AlgebraElement to_float() const;

  /// Exact equality; floating mode compares doubles bit-for-bit.
  bool operator==(const AlgebraElement& o) const;

 private:
  AlgebraElement(SpecPtr spec, CoeffMode mode) : spec_(std::move(spec)), mode_(mode) {}
  SpecPtr spec_;
  CoeffMode mode_;
  ExactTerms exact_;
  FloatTerms float_;
};

AlgebraElement add(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement scale(const AlgebraElement& a, const Rational& c);
AlgebraElement scale(const AlgebraElement& a, double c);

/// Group-ring product (sum a_g g)(sum b_h h) = sum a_g b_h (gh), with
/// normal-form recombination of the products gh.
AlgebraElement convolve(const AlgebraElement& a, const AlgebraElement& b);

/// p = (1 + g + ... + g^(d-1)) / d for g of finite order d.
/// Throws InfiniteOrder otherwise. Always exact.
AlgebraElement build_idempotent(const GroupElement& g);

/// convolve(a, a) == a, exactly. Exact mode only (ModeMismatch on floats).
bool is_idempotent(const AlgebraElement& a);

struct SobolevParams {
  double s = 0.0;  // must be >= 0
};

/// sqrt(sum |c_g|^2 (1+l(g))^(2s)). Terms are accumulated in descending
/// magnitude with compensated summation; exact coefficients are converted
/// to binary64 for the evaluation.
double sobolev_norm(const AlgebraElement& a, const SobolevParams& params);

/// tau_0: the coefficient of the identity.
Rational delta_trace(const AlgebraElement& a);
double delta_trace_value(const AlgebraElement& a);

/// Augmentation: the sum of all coefficients (trace of the trivial action).
Rational augmentation_trace(const AlgebraElement& a);
double augmentation_trace_value(const AlgebraElement& a);

/// File form: a header recording mode and spec hash, then one
/// "coefficient<TAB>word" line per support element in key order.
void save_algebra_element(std::ostream& out, const AlgebraElement& a);
AlgebraElement load_algebra_element(std::istream& in, SpecPtr spec);

}  // namespace tracesep
