#include "tracesep/group.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numeric>
#include <sstream>

#include "tracesep/errors.hpp"

namespace tracesep {

namespace {

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex16(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

/// Canonical residue of an exponent in a factor; 0 means the syllable
/// vanishes. Finite factors reduce mod d into {0,...,d-1}.
std::int64_t canonical_exponent(std::uint64_t order, std::int64_t e) {
  if (order == 0) return e;
  const std::int64_t d = static_cast<std::int64_t>(order);
  std::int64_t r = e % d;
  if (r < 0) r += d;
  return r;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

SpecPtr GroupSpec::make(std::vector<CyclicFactor> factors) {
  if (factors.empty()) throw InvalidSpec("factors: at least one factor is required");
  for (const auto& f : factors) {
    if (f.order == 1)
      throw InvalidSpec("factor '" + f.name + "': order 1 denotes the trivial group and is disallowed");
    if (!is_identifier(f.name))
      throw InvalidSpec("factor name '" + f.name + "': not a valid identifier");
  }
  for (std::size_t i = 0; i < factors.size(); ++i)
    for (std::size_t j = i + 1; j < factors.size(); ++j)
      if (factors[i].name == factors[j].name)
        throw InvalidSpec("factor name '" + factors[i].name + "': duplicate generator name");

  auto spec = std::shared_ptr<GroupSpec>(new GroupSpec());
  spec->factors_ = std::move(factors);
  std::ostringstream canon;
  canon << "format_version = 1\n";
  canon << "type = free_product\n";
  for (const auto& f : spec->factors_) canon << "factor = " << f.order << " " << f.name << "\n";
  spec->canonical_ = canon.str();
  spec->hash_ = hex16(fnv1a(spec->canonical_));
  return spec;
}

std::optional<std::uint32_t> GroupSpec::factor_index(std::string_view name) const {
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (factors_[i].name == name) return static_cast<std::uint32_t>(i);
  return std::nullopt;
}

SpecPtr parse_group_spec(std::string_view text) {
  bool saw_version = false;
  bool saw_type = false;
  std::vector<CyclicFactor> factors;

  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) {
      if (pos > text.size()) break;
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw MalformedSpec("line " + std::to_string(lineno) + ": expected 'key = value'");
    std::string_view key = trim(line.substr(0, eq));
    std::string_view value = trim(line.substr(eq + 1));

    if (key == "format_version") {
      int v = 0;
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc() || p != value.data() + value.size())
        throw MalformedSpec("format_version: not an integer");
      if (v != 1) throw InvalidSpec("format_version: must be 1, got " + std::string(value));
      saw_version = true;
    } else if (key == "type") {
      if (value != "free_product")
        throw InvalidSpec("type: must be 'free_product', got '" + std::string(value) + "'");
      saw_type = true;
    } else if (key == "factor") {
      const auto space = value.find_first_of(" \t");
      if (space == std::string_view::npos)
        throw MalformedSpec("factor: expected '<order> <name>' on line " + std::to_string(lineno));
      std::string_view order_text = trim(value.substr(0, space));
      std::string_view name = trim(value.substr(space + 1));
      std::int64_t order = 0;
      auto [p, ec] = std::from_chars(order_text.data(), order_text.data() + order_text.size(), order);
      if (ec != std::errc() || p != order_text.data() + order_text.size())
        throw MalformedSpec("factor order: not an integer on line " + std::to_string(lineno));
      if (order < 0) throw InvalidSpec("factor order: must be >= 0, got " + std::string(order_text));
      factors.push_back(CyclicFactor{static_cast<std::uint64_t>(order), std::string(name)});
    } else {
      throw MalformedSpec("unknown key '" + std::string(key) + "' on line " + std::to_string(lineno));
    }
    if (pos > text.size()) break;
  }

  if (!saw_version) throw MalformedSpec("format_version: missing");
  if (!saw_type) throw MalformedSpec("type: missing");
  return GroupSpec::make(std::move(factors));
}

std::uint64_t Order::value() const {
  if (!is_finite()) throw InfiniteOrder("order is infinite");
  return value_;
}

std::uint64_t syllable_length(const GroupSpec& spec, const Syllable& s) {
  const std::uint64_t d = spec.factor(s.factor).order;
  if (d == 0) return static_cast<std::uint64_t>(s.exponent < 0 ? -s.exponent : s.exponent);
  const std::uint64_t e = static_cast<std::uint64_t>(s.exponent);
  return std::min(e, d - e);
}

void require_same_spec(const GroupElement& a, const GroupElement& b) {
  if (a.spec().get() == b.spec().get()) return;
  if (!a.spec()->same_group(*b.spec()))
    throw MixedSpecs("elements come from different group specs");
}

GroupElement GroupElement::identity(SpecPtr spec) {
  return GroupElement(std::move(spec), {}, 0);
}

GroupElement GroupElement::reduce(SpecPtr spec, std::span<const Syllable> raw) {
  std::vector<Syllable> stack;
  for (const Syllable& s : raw) {
    if (s.factor >= spec->factor_count())
      throw InvalidSpec("syllable factor index " + std::to_string(s.factor) + " out of range");
    const std::uint64_t d = spec->factor(s.factor).order;
    std::int64_t e = canonical_exponent(d, s.exponent);
    if (e == 0) continue;
    if (!stack.empty() && stack.back().factor == s.factor) {
      std::int64_t merged = canonical_exponent(d, stack.back().exponent + e);
      if (merged == 0)
        stack.pop_back();
      else
        stack.back().exponent = merged;
    } else {
      stack.push_back(Syllable{s.factor, e});
    }
  }
  std::uint64_t len = 0;
  for (const Syllable& s : stack) len += syllable_length(*spec, s);
  return GroupElement(std::move(spec), std::move(stack), len);
}

GroupElement GroupElement::times(const GroupElement& o) const {
  require_same_spec(*this, o);
  const auto& left = syllables_;
  const auto& right = o.syllables_;
  std::size_t i = left.size();
  std::size_t j = 0;
  std::optional<Syllable> bridge;
  while (i > 0 && j < right.size() && left[i - 1].factor == right[j].factor) {
    const std::uint64_t d = spec_->factor(right[j].factor).order;
    std::int64_t merged = canonical_exponent(d, left[i - 1].exponent + right[j].exponent);
    --i;
    ++j;
    if (merged != 0) {
      bridge = Syllable{right[j - 1].factor, merged};
      break;
    }
  }
  std::vector<Syllable> out;
  out.reserve(i + (bridge ? 1 : 0) + (right.size() - j));
  out.insert(out.end(), left.begin(), left.begin() + static_cast<std::ptrdiff_t>(i));
  if (bridge) out.push_back(*bridge);
  out.insert(out.end(), right.begin() + static_cast<std::ptrdiff_t>(j), right.end());
  std::uint64_t len = 0;
  for (const Syllable& s : out) len += syllable_length(*spec_, s);
  return GroupElement(spec_, std::move(out), len);
}

GroupElement GroupElement::inverse() const {
  std::vector<Syllable> out;
  out.reserve(syllables_.size());
  for (auto it = syllables_.rbegin(); it != syllables_.rend(); ++it) {
    const std::uint64_t d = spec_->factor(it->factor).order;
    out.push_back(Syllable{it->factor, canonical_exponent(d, -it->exponent)});
  }
  return GroupElement(spec_, std::move(out), length_);
}

GroupElement GroupElement::pow(std::uint64_t t) const {
  GroupElement acc = identity(spec_);
  for (std::uint64_t i = 0; i < t; ++i) acc = acc.times(*this);
  return acc;
}

GroupElement GroupElement::conjugated_by(const GroupElement& w) const {
  return w.times(*this).times(w.inverse());
}

std::pair<GroupElement, GroupElement> GroupElement::cyclic_reduction() const {
  std::vector<Syllable> core = syllables_;
  std::vector<Syllable> conj;
  // Peel the first syllable while it shares a factor with the last; the
  // peeled prefixes multiply to the conjugator: g = conj * core * conj^-1.
  while (core.size() >= 2 && core.front().factor == core.back().factor) {
    const Syllable s = core.front();
    const std::uint64_t d = spec_->factor(s.factor).order;
    core.erase(core.begin());
    std::int64_t merged = canonical_exponent(d, core.back().exponent + s.exponent);
    if (merged == 0)
      core.pop_back();
    else
      core.back().exponent = merged;
    conj.push_back(s);
  }
  GroupElement conj_el = reduce(spec_, conj);
  std::uint64_t len = 0;
  for (const Syllable& s : core) len += syllable_length(*spec_, s);
  return {GroupElement(spec_, std::move(core), len), std::move(conj_el)};
}

Order GroupElement::order() const {
  auto [core, conj] = cyclic_reduction();
  const auto& syl = core.syllables();
  if (syl.empty()) return Order::finite(1);
  if (syl.size() == 1) {
    const std::uint64_t d = spec_->factor(syl[0].factor).order;
    if (d == 0) return Order::infinite();
    const std::uint64_t e = static_cast<std::uint64_t>(syl[0].exponent);
    return Order::finite(d / std::gcd(e, d));
  }
  // A cyclically reduced word with two or more syllables has infinite
  // order in a free product.
  return Order::infinite();
}

bool GroupElement::conjugate_to(const GroupElement& o) const {
  require_same_spec(*this, o);
  auto [u, cu] = cyclic_reduction();
  auto [v, cv] = o.cyclic_reduction();
  const auto& us = u.syllables();
  const auto& vs = v.syllables();
  if (us.size() != vs.size()) return false;
  if (us.empty()) return true;
  if (us.size() == 1) {
    // Cores inside one cyclic factor: conjugacy in the free product
    // restricts to conjugacy in the (abelian) factor, i.e. equality.
    return us[0] == vs[0];
  }
  // Cyclically reduced cores of syllable length >= 2 are conjugate iff
  // one is a cyclic rotation of the other.
  const std::size_t n = us.size();
  for (std::size_t shift = 0; shift < n; ++shift) {
    bool match = true;
    for (std::size_t i = 0; i < n && match; ++i) {
      if (us[(shift + i) % n] != vs[i]) match = false;
    }
    if (match) return true;
  }
  return false;
}

std::string GroupElement::word() const {
  if (syllables_.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < syllables_.size(); ++i) {
    if (i) out += ' ';
    out += spec_->factor(syllables_[i].factor).name;
    out += ':';
    out += std::to_string(syllables_[i].exponent);
  }
  return out;
}

GroupElement GroupElement::parse(SpecPtr spec, std::string_view word) {
  std::string_view w = trim(word);
  if (w.empty()) throw MalformedWord("empty element word");
  if (w == "e") return identity(std::move(spec));

  std::vector<Syllable> raw;
  std::size_t pos = 0;
  while (pos < w.size()) {
    while (pos < w.size() && std::isspace(static_cast<unsigned char>(w[pos]))) ++pos;
    if (pos >= w.size()) break;
    std::size_t end = pos;
    while (end < w.size() && !std::isspace(static_cast<unsigned char>(w[end]))) ++end;
    std::string_view token = w.substr(pos, end - pos);
    pos = end;

    const auto colon = token.find(':');
    if (colon == std::string_view::npos)
      throw MalformedWord("token '" + std::string(token) + "': expected name:exponent");
    std::string_view name = token.substr(0, colon);
    std::string_view exp_text = token.substr(colon + 1);
    auto idx = spec->factor_index(name);
    if (!idx)
      throw MalformedWord("token '" + std::string(token) + "': unknown generator '" +
                          std::string(name) + "'");
    std::int64_t e = 0;
    auto [p, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), e);
    if (ec != std::errc() || p != exp_text.data() + exp_text.size())
      throw MalformedWord("token '" + std::string(token) + "': invalid exponent");
    raw.push_back(Syllable{*idx, e});
  }
  if (raw.empty()) throw MalformedWord("empty element word");
  return reduce(std::move(spec), raw);
}

bool GroupElement::operator==(const GroupElement& o) const {
  if (syllables_ != o.syllables_) return false;
  return spec_.get() == o.spec_.get() || spec_->same_group(*o.spec_);
}

std::size_t ElementHash::operator()(const GroupElement& g) const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const Syllable& s : g.syllables()) {
    h ^= s.factor;
    h *= 0x100000001b3ull;
    h ^= static_cast<std::uint64_t>(s.exponent);
    h *= 0x100000001b3ull;
  }
  return static_cast<std::size_t>(h);
}

}  // namespace tracesep
