#include "tracesep/rational.hpp"

#include <charconv>
#include <numeric>

#include "tracesep/errors.hpp"

namespace tracesep {

namespace {

using i128 = __int128;

std::int64_t narrow(i128 v, const char* what) {
  if (v > i128(INT64_MAX) || v < i128(INT64_MIN))
    throw Overflow(std::string("rational overflow in ") + what);
  return static_cast<std::int64_t>(v);
}

i128 iabs(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
  a = iabs(a);
  b = iabs(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Values returned here are already coprime with a positive denominator,
// so the Rational constructor's own reduction is a no-op.
Rational make_reduced(i128 num, i128 den, const char* what) {
  if (den == 0) throw Overflow("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num == 0) return Rational(0);
  i128 g = gcd128(num, den);
  return Rational(narrow(num / g, what), narrow(den / g, what));
}

std::int64_t parse_i64(std::string_view text, const char* what) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw MalformedWord(std::string("invalid integer in ") + what + ": '" +
                        std::string(text) + "'");
  return v;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Overflow("rational with zero denominator");
  i128 n = num, d = den;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  if (n == 0) {
    num_ = 0;
    den_ = 1;
    return;
  }
  const i128 g = gcd128(n, d);
  num_ = narrow(n / g, "construction");
  den_ = narrow(d / g, "construction");
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = narrow(-i128(num_), "negation");
  r.den_ = den_;
  return r;
}

Rational operator+(const Rational& a, const Rational& b) {
  return make_reduced(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
                      i128(a.den_) * b.den_, "addition");
}

Rational operator-(const Rational& a, const Rational& b) {
  return make_reduced(i128(a.num_) * b.den_ - i128(b.num_) * a.den_,
                      i128(a.den_) * b.den_, "subtraction");
}

Rational operator*(const Rational& a, const Rational& b) {
  return make_reduced(i128(a.num_) * b.num_, i128(a.den_) * b.den_,
                      "multiplication");
}

std::strong_ordering Rational::operator<=>(const Rational& o) const {
  i128 lhs = i128(num_) * o.den_;
  i128 rhs = i128(o.num_) * den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_i64(text, "rational"));
  std::int64_t num = parse_i64(text.substr(0, slash), "rational numerator");
  std::int64_t den = parse_i64(text.substr(slash + 1), "rational denominator");
  if (den == 0) throw MalformedWord("rational with zero denominator");
  return Rational(num, den);
}

}  // namespace tracesep
