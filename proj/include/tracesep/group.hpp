#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tracesep {

class GroupSpec;
using SpecPtr = std::shared_ptr<const GroupSpec>;

/// One cyclic factor of a free product. order 0 means infinite cyclic.
struct CyclicFactor {
  std::uint64_t order = 0;
  std::string name;
};

/**
 * A free product of cyclic groups, fixed at construction. Word, length,
 * order and conjugacy problems are all exactly solvable in this class,
 * which is why the universe of the library is restricted to it.
 */
class GroupSpec {
 public:
  /// Validates: at least one factor, finite orders >= 2, distinct names
  /// that parse as identifiers. Throws InvalidSpec.
  static SpecPtr make(std::vector<CyclicFactor> factors);

  std::size_t factor_count() const { return factors_.size(); }
  const CyclicFactor& factor(std::size_t i) const { return factors_[i]; }
  std::optional<std::uint32_t> factor_index(std::string_view name) const;

  /// Fixed key order and factor sequence; input for the stable hash.
  const std::string& canonical_text() const { return canonical_; }
  /// 16 hex digits, FNV-1a over the canonical text.
  const std::string& hash_hex() const { return hash_; }

  bool same_group(const GroupSpec& o) const { return canonical_ == o.canonical_; }

 private:
  GroupSpec() = default;
  std::vector<CyclicFactor> factors_;
  std::string canonical_;
  std::string hash_;
};

/// Parse the group-spec document format (see README). Throws
/// MalformedSpec on syntax errors, InvalidSpec on semantic ones.
SpecPtr parse_group_spec(std::string_view text);

/// One syllable of an alternating normal form. For a finite factor of
/// order d the exponent is the canonical residue in {1,...,d-1}; for an
/// infinite factor it is any nonzero integer.
struct Syllable {
  std::uint32_t factor = 0;
  std::int64_t exponent = 0;

  bool operator==(const Syllable&) const = default;
  auto operator<=>(const Syllable&) const = default;
};

/// Order of a group element: a positive integer or infinite.
class Order {
 public:
  static Order finite(std::uint64_t d) { return Order(d); }
  static Order infinite() { return Order(0); }

  bool is_finite() const { return value_ != 0; }
  std::uint64_t value() const;  // throws InfiniteOrder when infinite

  bool operator==(const Order&) const = default;

 private:
  explicit Order(std::uint64_t v) : value_(v) {}
  std::uint64_t value_;  // 0 encodes infinity
};

/**
 * A group element in alternating-syllable normal form, together with the
 * spec it lives in and its cached geodesic length. Immutable; all
 * operations are pure and safe to share across threads.
 */
class GroupElement {
 public:
  static GroupElement identity(SpecPtr spec);

  /// Normal form of a raw syllable word (any exponents, including zero
  /// and out-of-range; adjacent syllables may repeat factors).
  static GroupElement reduce(SpecPtr spec, std::span<const Syllable> raw);

  /// Parse "name:exponent name:exponent ..." or "e".
  static GroupElement parse(SpecPtr spec, std::string_view word);

  const SpecPtr& spec() const { return spec_; }
  const std::vector<Syllable>& syllables() const { return syllables_; }
  bool is_identity() const { return syllables_.empty(); }

  /// Geodesic word length over the symmetric generator set.
  std::uint64_t length() const { return length_; }

  GroupElement times(const GroupElement& o) const;
  GroupElement inverse() const;
  GroupElement pow(std::uint64_t t) const;
  GroupElement conjugated_by(const GroupElement& w) const;  // w * this * w^-1

  Order order() const;

  /// (core, conjugator) with *this == conjugator * core * conjugator^-1
  /// and core cyclically reduced.
  std::pair<GroupElement, GroupElement> cyclic_reduction() const;

  bool conjugate_to(const GroupElement& o) const;

  /// Serialized word, "e" for the identity.
  std::string word() const;

  bool operator==(const GroupElement& o) const;

 private:
  GroupElement(SpecPtr spec, std::vector<Syllable> syl, std::uint64_t len)
      : spec_(std::move(spec)), syllables_(std::move(syl)), length_(len) {}

  SpecPtr spec_;
  std::vector<Syllable> syllables_;
  std::uint64_t length_ = 0;
};

/// Deterministic strict weak order on normal forms (syllable-lexicographic);
/// used as the map key order inside algebra elements.
struct ElementKeyLess {
  bool operator()(const GroupElement& a, const GroupElement& b) const {
    return a.syllables() < b.syllables();
  }
};

struct ElementHash {
  std::size_t operator()(const GroupElement& g) const;
};

/// Geodesic length of a single syllable under the given spec.
std::uint64_t syllable_length(const GroupSpec& spec, const Syllable& s);

/// Throws MixedSpecs unless a and b live in the same group.
void require_same_spec(const GroupElement& a, const GroupElement& b);

// Free-function spellings of the element operations.
inline GroupElement normal_form(SpecPtr spec, std::span<const Syllable> raw) {
  return GroupElement::reduce(std::move(spec), raw);
}
inline GroupElement multiply(const GroupElement& a, const GroupElement& b) { return a.times(b); }
inline GroupElement inverse(const GroupElement& a) { return a.inverse(); }
inline std::uint64_t length(const GroupElement& a) { return a.length(); }
inline Order element_order(const GroupElement& a) { return a.order(); }
inline std::pair<GroupElement, GroupElement> cyclically_reduce(const GroupElement& a) {
  return a.cyclic_reduction();
}
inline bool are_conjugate(const GroupElement& a, const GroupElement& b) {
  return a.conjugate_to(b);
}

}  // namespace tracesep
