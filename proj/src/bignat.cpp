#include "tracesep/bignat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tracesep/errors.hpp"

namespace tracesep {

BigNat::BigNat(std::uint64_t v) {
  if (v != 0) {
    limbs_.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
    if (v >> 32) limbs_.push_back(static_cast<std::uint32_t>(v >> 32));
  }
}

void BigNat::trim() {
  while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

BigNat& BigNat::operator+=(const BigNat& o) {
  const std::size_t n = std::max(limbs_.size(), o.limbs_.size());
  limbs_.resize(n, 0);
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t sum = carry + limbs_[i];
    if (i < o.limbs_.size()) sum += o.limbs_[i];
    limbs_[i] = static_cast<std::uint32_t>(sum & 0xffffffffu);
    carry = sum >> 32;
  }
  if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
  return *this;
}

BigNat operator*(const BigNat& a, const BigNat& b) {
  BigNat r;
  if (a.is_zero() || b.is_zero()) return r;
  r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
  for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
    std::uint64_t carry = 0;
    const std::uint64_t ai = a.limbs_[i];
    for (std::size_t j = 0; j < b.limbs_.size(); ++j) {
      std::uint64_t cur = r.limbs_[i + j] + ai * b.limbs_[j] + carry;
      r.limbs_[i + j] = static_cast<std::uint32_t>(cur & 0xffffffffu);
      carry = cur >> 32;
    }
    std::size_t k = i + b.limbs_.size();
    while (carry) {
      std::uint64_t cur = r.limbs_[k] + carry;
      r.limbs_[k] = static_cast<std::uint32_t>(cur & 0xffffffffu);
      carry = cur >> 32;
      ++k;
    }
  }
  r.trim();
  return r;
}

BigNat BigNat::power(std::uint64_t base, std::uint64_t exp) {
  BigNat result(1);
  BigNat b(base);
  while (exp > 0) {
    if (exp & 1) result = result * b;
    exp >>= 1;
    if (exp > 0) b = b * b;
  }
  return result;
}

std::strong_ordering BigNat::operator<=>(const BigNat& o) const {
  if (limbs_.size() != o.limbs_.size())
    return limbs_.size() <=> o.limbs_.size();
  for (std::size_t i = limbs_.size(); i-- > 0;) {
    if (limbs_[i] != o.limbs_[i]) return limbs_[i] <=> o.limbs_[i];
  }
  return std::strong_ordering::equal;
}

std::uint64_t BigNat::to_u64() const {
  if (!fits_u64()) throw Overflow("BigNat value does not fit in 64 bits");
  std::uint64_t v = 0;
  if (limbs_.size() > 1) v = static_cast<std::uint64_t>(limbs_[1]) << 32;
  if (!limbs_.empty()) v |= limbs_[0];
  return v;
}

std::size_t BigNat::bit_length() const {
  if (limbs_.empty()) return 0;
  std::uint32_t top = limbs_.back();
  std::size_t bits = (limbs_.size() - 1) * 32;
  while (top) {
    ++bits;
    top >>= 1;
  }
  return bits;
}

double BigNat::to_double() const {
  if (limbs_.empty()) return 0.0;
  // Top three limbs carry 96 bits of mantissa, more than a double holds.
  double v = 0.0;
  const std::size_t n = limbs_.size();
  const std::size_t take = std::min<std::size_t>(3, n);
  for (std::size_t i = 0; i < take; ++i) {
    v = v * 4294967296.0 + static_cast<double>(limbs_[n - 1 - i]);
  }
  const int shift_limbs = static_cast<int>(n - take);
  if (shift_limbs > 60000) return std::numeric_limits<double>::infinity();
  return std::ldexp(v, 32 * shift_limbs);
}

double BigNat::log2() const {
  if (limbs_.empty()) return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const std::size_t n = limbs_.size();
  const std::size_t take = std::min<std::size_t>(3, n);
  for (std::size_t i = 0; i < take; ++i) {
    v = v * 4294967296.0 + static_cast<double>(limbs_[n - 1 - i]);
  }
  return std::log2(v) + 32.0 * static_cast<double>(n - take);
}

std::uint32_t BigNat::divmod_small(std::uint32_t divisor) {
  std::uint64_t rem = 0;
  for (std::size_t i = limbs_.size(); i-- > 0;) {
    std::uint64_t cur = (rem << 32) | limbs_[i];
    limbs_[i] = static_cast<std::uint32_t>(cur / divisor);
    rem = cur % divisor;
  }
  trim();
  return static_cast<std::uint32_t>(rem);
}

std::string BigNat::to_string() const {
  if (limbs_.empty()) return "0";
  BigNat tmp = *this;
  std::string out;
  while (!tmp.is_zero()) {
    std::uint32_t chunk = tmp.divmod_small(1000000000u);
    std::string part = std::to_string(chunk);
    if (!tmp.is_zero()) part.insert(0, 9 - part.size(), '0');
    out.insert(0, part);
  }
  return out;
}

BigNat BigNat::parse(std::string_view text) {
  if (text.empty()) throw MalformedWord("empty count literal");
  BigNat r;
  for (char c : text) {
    if (c < '0' || c > '9')
      throw MalformedWord(std::string("invalid digit in count literal: '") + c + "'");
    r = r * BigNat(10);
    r += BigNat(static_cast<std::uint64_t>(c - '0'));
  }
  return r;
}

}  // namespace tracesep
