#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace tracesep {

/**
 * Exact rational with 64-bit numerator and denominator, always reduced,
 * denominator positive. Every operation checks for overflow and throws
 * Overflow rather than silently wrapping; the quantities that must stay
 * exact here (idempotent coefficients, trace-matrix entries) are tiny,
 * so hitting the limit means a usage bug, not a capacity problem.
 */
class Rational {
 public:
  constexpr Rational() : num_(0), den_(1) {}
  Rational(std::int64_t n) : num_(n), den_(1) {}
  Rational(std::int64_t num, std::int64_t den);

  /// Parse "p" or "p/q". Throws MalformedWord on anything else.
  static Rational parse(std::string_view text);

  Rational operator-() const;
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  bool operator==(const Rational& o) const = default;
  std::strong_ordering operator<=>(const Rational& o) const;

  bool is_zero() const { return num_ == 0; }
  int sign() const { return num_ > 0 ? 1 : num_ < 0 ? -1 : 0; }
  Rational abs() const { return num_ < 0 ? -*this : *this; }

  std::int64_t numerator() const { return num_; }
  std::int64_t denominator() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// "p" when the denominator is 1, otherwise "p/q".
  std::string to_string() const;

 private:
  std::int64_t num_;
  std::int64_t den_;  // > 0
};

}  // namespace tracesep
