#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tracesep {

/**
 * Arbitrary-precision unsigned integer.
 *
 * Conjugacy shell counts outgrow 64 bits quickly (the counts of the
 * exponentially growing classes reach 2^200 and beyond at the radii the
 * shell schedules need), so profiles store their counts in this type.
 * Little-endian base-2^32 limbs, schoolbook arithmetic; the values in
 * play stay under a few thousand bits.
 */
class BigNat {
 public:
  BigNat() = default;
  BigNat(std::uint64_t v);

  static BigNat power(std::uint64_t base, std::uint64_t exp);

  /// Parse a decimal string. Throws MalformedWord on anything else.
  static BigNat parse(std::string_view text);

  BigNat& operator+=(const BigNat& o);
  friend BigNat operator+(BigNat a, const BigNat& b) {
    a += b;
    return a;
  }
  BigNat& operator*=(const BigNat& o) {
    *this = *this * o;
    return *this;
  }
  friend BigNat operator*(const BigNat& a, const BigNat& b);

  std::strong_ordering operator<=>(const BigNat& o) const;
  bool operator==(const BigNat& o) const { return limbs_ == o.limbs_; }

  bool is_zero() const { return limbs_.empty(); }
  bool fits_u64() const { return limbs_.size() <= 2; }
  std::uint64_t to_u64() const;  // throws Overflow if too large

  /// Nearest double, +inf once past the double range.
  double to_double() const;

  /// log2 of the value; -inf for zero. Accurate to ~1e-15 relative.
  double log2() const;

  std::string to_string() const;

  std::size_t bit_length() const;

 private:
  std::vector<std::uint32_t> limbs_;  // little endian, no trailing zero limb
  void trim();
  std::uint32_t divmod_small(std::uint32_t divisor);  // in-place, returns remainder
};

}  // namespace tracesep
