#include "tracesep/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <vector>

#include "tracesep/errors.hpp"

namespace tracesep {

namespace {

void require_same_spec_alg(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.spec().get() == b.spec().get()) return;
  if (!a.spec()->same_group(*b.spec()))
    throw MixedSpecs("algebra elements come from different group specs");
}

void require_same_mode(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.mode() != b.mode())
    throw ModeMismatch("algebra elements have different coefficient modes");
}

}  // namespace

AlgebraElement AlgebraElement::zero(SpecPtr spec, CoeffMode mode) {
  return AlgebraElement(std::move(spec), mode);
}

AlgebraElement AlgebraElement::term(const GroupElement& g, const Rational& coeff) {
  AlgebraElement e(g.spec(), CoeffMode::exact);
  if (!coeff.is_zero()) e.exact_.emplace(g, coeff);
  return e;
}

AlgebraElement AlgebraElement::term(const GroupElement& g, double coeff) {
  AlgebraElement e(g.spec(), CoeffMode::floating);
  if (coeff != 0.0) e.float_.emplace(g, coeff);
  return e;
}

AlgebraElement AlgebraElement::from_exact_terms(SpecPtr spec, ExactTerms terms) {
  AlgebraElement e(std::move(spec), CoeffMode::exact);
  for (auto& [g, c] : terms)
    if (!c.is_zero()) e.exact_.emplace(g, c);
  return e;
}

AlgebraElement AlgebraElement::from_float_terms(SpecPtr spec, FloatTerms terms) {
  AlgebraElement e(std::move(spec), CoeffMode::floating);
  for (auto& [g, c] : terms)
    if (c != 0.0) e.float_.emplace(g, c);
  return e;
}

std::size_t AlgebraElement::support_size() const {
  return mode_ == CoeffMode::exact ? exact_.size() : float_.size();
}

const AlgebraElement::ExactTerms& AlgebraElement::exact_terms() const {
  if (mode_ != CoeffMode::exact)
    throw ModeMismatch("exact coefficients requested from a floating element");
  return exact_;
}

const AlgebraElement::FloatTerms& AlgebraElement::float_terms() const {
  if (mode_ != CoeffMode::floating)
    throw ModeMismatch("floating coefficients requested from an exact element");
  return float_;
}

Rational AlgebraElement::exact_coefficient(const GroupElement& g) const {
  const auto& terms = exact_terms();
  auto it = terms.find(g);
  return it == terms.end() ? Rational(0) : it->second;
}

double AlgebraElement::coefficient_value(const GroupElement& g) const {
  if (mode_ == CoeffMode::exact) {
    auto it = exact_.find(g);
    return it == exact_.end() ? 0.0 : it->second.to_double();
  }
  auto it = float_.find(g);
  return it == float_.end() ? 0.0 : it->second;
}

AlgebraElement AlgebraElement::to_float() const {
  if (mode_ == CoeffMode::floating) return *this;
  AlgebraElement e(spec_, CoeffMode::floating);
  for (const auto& [g, c] : exact_) e.float_.emplace(g, c.to_double());
  return e;
}

bool AlgebraElement::operator==(const AlgebraElement& o) const {
  if (mode_ != o.mode_) return false;
  if (spec_.get() != o.spec_.get() && !spec_->same_group(*o.spec_)) return false;
  return mode_ == CoeffMode::exact ? exact_ == o.exact_ : float_ == o.float_;
}

AlgebraElement add(const AlgebraElement& a, const AlgebraElement& b) {
  require_same_spec_alg(a, b);
  require_same_mode(a, b);
  if (a.mode() == CoeffMode::exact) {
    AlgebraElement::ExactTerms out = a.exact_terms();
    for (const auto& [g, c] : b.exact_terms()) {
      auto [it, inserted] = out.emplace(g, c);
      if (!inserted) it->second += c;
    }
    return AlgebraElement::from_exact_terms(a.spec(), std::move(out));
  }
  AlgebraElement::FloatTerms out = a.float_terms();
  for (const auto& [g, c] : b.float_terms()) {
    auto [it, inserted] = out.emplace(g, c);
    if (!inserted) it->second += c;
  }
  return AlgebraElement::from_float_terms(a.spec(), std::move(out));
}

AlgebraElement scale(const AlgebraElement& a, const Rational& c) {
  if (a.mode() != CoeffMode::exact)
    throw ModeMismatch("rational scale applied to a floating element");
  AlgebraElement::ExactTerms out;
  for (const auto& [g, v] : a.exact_terms()) out.emplace(g, v * c);
  return AlgebraElement::from_exact_terms(a.spec(), std::move(out));
}

AlgebraElement scale(const AlgebraElement& a, double c) {
  if (a.mode() != CoeffMode::floating)
    throw ModeMismatch("floating scale applied to an exact element");
  AlgebraElement::FloatTerms out;
  for (const auto& [g, v] : a.float_terms()) out.emplace(g, v * c);
  return AlgebraElement::from_float_terms(a.spec(), std::move(out));
}

AlgebraElement convolve(const AlgebraElement& a, const AlgebraElement& b) {
  require_same_spec_alg(a, b);
  require_same_mode(a, b);
  if (a.mode() == CoeffMode::exact) {
    AlgebraElement::ExactTerms out;
    for (const auto& [g, cg] : a.exact_terms()) {
      for (const auto& [h, ch] : b.exact_terms()) {
        GroupElement gh = g.times(h);
        Rational prod = cg * ch;
        auto [it, inserted] = out.emplace(std::move(gh), prod);
        if (!inserted) it->second += prod;
      }
    }
    return AlgebraElement::from_exact_terms(a.spec(), std::move(out));
  }
  AlgebraElement::FloatTerms out;
  for (const auto& [g, cg] : a.float_terms()) {
    for (const auto& [h, ch] : b.float_terms()) {
      GroupElement gh = g.times(h);
      auto [it, inserted] = out.emplace(std::move(gh), cg * ch);
      if (!inserted) it->second += cg * ch;
    }
  }
  return AlgebraElement::from_float_terms(a.spec(), std::move(out));
}

AlgebraElement build_idempotent(const GroupElement& g) {
  Order o = g.order();
  if (!o.is_finite())
    throw InfiniteOrder("build_idempotent: element '" + g.word() + "' has infinite order");
  const std::uint64_t d = o.value();
  const Rational inv_d(1, static_cast<std::int64_t>(d));
  AlgebraElement::ExactTerms terms;
  GroupElement power = GroupElement::identity(g.spec());
  for (std::uint64_t t = 0; t < d; ++t) {
    terms.emplace(power, inv_d);
    power = power.times(g);
  }
  return AlgebraElement::from_exact_terms(g.spec(), std::move(terms));
}

bool is_idempotent(const AlgebraElement& a) {
  if (a.mode() != CoeffMode::exact)
    throw ModeMismatch("is_idempotent requires an exact element");
  return convolve(a, a) == a;
}

double sobolev_norm(const AlgebraElement& a, const SobolevParams& params) {
  if (params.s < 0.0) throw InvalidParameter("sobolev exponent s must be >= 0");
  std::vector<double> weights;
  weights.reserve(a.support_size());
  auto push = [&](const GroupElement& g, double c) {
    const double w = 1.0 + static_cast<double>(g.length());
    weights.push_back(c * c * std::pow(w, 2.0 * params.s));
  };
  if (a.mode() == CoeffMode::exact) {
    for (const auto& [g, c] : a.exact_terms()) push(g, c.to_double());
  } else {
    for (const auto& [g, c] : a.float_terms()) push(g, c);
  }
  std::sort(weights.begin(), weights.end(), std::greater<double>());
  // Kahan summation over the sorted terms.
  double sum = 0.0, comp = 0.0;
  for (double w : weights) {
    double y = w - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return std::sqrt(sum);
}

Rational delta_trace(const AlgebraElement& a) {
  return a.exact_coefficient(GroupElement::identity(a.spec()));
}

double delta_trace_value(const AlgebraElement& a) {
  return a.coefficient_value(GroupElement::identity(a.spec()));
}

Rational augmentation_trace(const AlgebraElement& a) {
  Rational sum(0);
  for (const auto& [g, c] : a.exact_terms()) sum += c;
  return sum;
}

double augmentation_trace_value(const AlgebraElement& a) {
  if (a.mode() == CoeffMode::exact) return augmentation_trace(a).to_double();
  double sum = 0.0;
  for (const auto& [g, c] : a.float_terms()) sum += c;
  return sum;
}

void save_algebra_element(std::ostream& out, const AlgebraElement& a) {
  out << "tracesep-algebra/1\n";
  out << "mode = " << (a.mode() == CoeffMode::exact ? "exact" : "float") << "\n";
  out << "spec_hash = " << a.spec()->hash_hex() << "\n";
  if (a.mode() == CoeffMode::exact) {
    for (const auto& [g, c] : a.exact_terms()) out << c.to_string() << '\t' << g.word() << '\n';
  } else {
    char buf[64];
    for (const auto& [g, c] : a.float_terms()) {
      std::snprintf(buf, sizeof buf, "%.17g", c);
      out << buf << '\t' << g.word() << '\n';
    }
  }
}

AlgebraElement load_algebra_element(std::istream& in, SpecPtr spec) {
  std::string line;
  if (!std::getline(in, line) || line != "tracesep-algebra/1")
    throw MalformedWord("algebra file: missing 'tracesep-algebra/1' header");
  if (!std::getline(in, line) || line.rfind("mode = ", 0) != 0)
    throw MalformedWord("algebra file: missing mode line");
  const std::string mode_text = line.substr(7);
  CoeffMode mode;
  if (mode_text == "exact")
    mode = CoeffMode::exact;
  else if (mode_text == "float")
    mode = CoeffMode::floating;
  else
    throw MalformedWord("algebra file: unknown mode '" + mode_text + "'");
  if (!std::getline(in, line) || line.rfind("spec_hash = ", 0) != 0)
    throw MalformedWord("algebra file: missing spec_hash line");
  if (line.substr(12) != spec->hash_hex())
    throw MixedSpecs("algebra file: spec hash does not match the provided group spec");

  AlgebraElement::ExactTerms exact;
  AlgebraElement::FloatTerms floating;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw MalformedWord("algebra file: expected 'coefficient<TAB>word'");
    const std::string coeff = line.substr(0, tab);
    GroupElement g = GroupElement::parse(spec, line.substr(tab + 1));
    if (mode == CoeffMode::exact)
      exact.emplace(std::move(g), Rational::parse(coeff));
    else
      floating.emplace(std::move(g), std::strtod(coeff.c_str(), nullptr));
  }
  return mode == CoeffMode::exact
             ? AlgebraElement::from_exact_terms(spec, std::move(exact))
             : AlgebraElement::from_float_terms(spec, std::move(floating));
}

}  // namespace tracesep
