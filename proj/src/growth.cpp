#include "tracesep/growth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "tracesep/errors.hpp"

namespace tracesep {

namespace {

constexpr std::uint64_t kSaturated = UINT64_MAX;

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > kSaturated - b ? kSaturated : a + b;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSaturated / b) return kSaturated;
  return a * b;
}

/// Number of exponents in the factor whose syllable length is exactly t.
std::uint64_t exponent_multiplicity(std::uint64_t order, std::uint64_t t) {
  if (t == 0) return 0;
  if (order == 0) return 2;  // +t and -t
  if (2 * t < order) return 2;
  if (2 * t == order) return 1;
  return 0;
}

std::uint64_t max_syllable_length(std::uint64_t order) {
  return order == 0 ? kSaturated : order / 2;
}

/// Per-length counts of normal forms, split by the factor of the last
/// syllable. counts[m][j] = number of normal forms of length m ending in
/// factor j; the empty word is handled by the callers.
template <typename Num>
std::vector<std::vector<Num>> last_factor_counts(const GroupSpec& spec, std::uint32_t max_len) {
  const std::size_t k = spec.factor_count();
  std::vector<std::vector<Num>> counts(max_len + 1, std::vector<Num>(k, Num(0)));
  for (std::uint32_t m = 1; m <= max_len; ++m) {
    for (std::size_t j = 0; j < k; ++j) {
      const std::uint64_t order = spec.factor(j).order;
      const std::uint64_t tmax = std::min<std::uint64_t>(m, max_syllable_length(order));
      Num total(0);
      for (std::uint64_t t = 1; t <= tmax; ++t) {
        const std::uint64_t mult = exponent_multiplicity(order, t);
        if (mult == 0) continue;
        Num prefixes(0);
        if (m == t) {
          prefixes = Num(1);  // empty prefix
        }
        for (std::size_t jp = 0; jp < k; ++jp) {
          if (jp == j) continue;
          if constexpr (std::is_same_v<Num, std::uint64_t>) {
            prefixes = sat_add(prefixes, counts[m - t][jp]);
          } else {
            prefixes += counts[m - t][jp];
          }
        }
        if constexpr (std::is_same_v<Num, std::uint64_t>) {
          total = sat_add(total, sat_mul(prefixes, mult));
        } else {
          total += prefixes * Num(mult);
        }
      }
      counts[m][j] = total;
    }
  }
  return counts;
}

template <typename Fn>
void run_chunked(std::size_t n, unsigned workers, Fn fn) {
  if (workers <= 1 || n < 2 * workers) {
    fn(0, 0, n);
    return;
  }
  std::vector<std::thread> threads;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = std::min<std::size_t>(w * chunk, n);
    const std::size_t end = std::min<std::size_t>(begin + chunk, n);
    if (begin == end) continue;
    threads.emplace_back([&fn, w, begin, end] { fn(w, begin, end); });
  }
  for (auto& t : threads) t.join();
}

}  // namespace

std::uint32_t conjugator_ball_radius(const GroupElement& core, std::uint32_t radius) {
  // Single-syllable cores: the minimal conjugator expression w c w^-1 is
  // reduced as written, so l(w) = (l - core)/2 reaches everything.
  // Longer cores additionally need room for a boundary merge (one
  // syllable) and for translating a rotation back to the core.
  const std::uint64_t core_len = core.length();
  if (radius < core_len) return 0;
  const std::uint64_t half = (radius - core_len + 1) / 2;
  if (core.syllables().size() <= 1) return static_cast<std::uint32_t>(half);
  std::uint64_t max_syl = 0;
  for (const Syllable& s : core.syllables())
    max_syl = std::max(max_syl, syllable_length(*core.spec(), s));
  return static_cast<std::uint32_t>(half + core_len + max_syl);
}

std::uint64_t ball_size_bound(const GroupSpec& spec, std::uint32_t radius) {
  auto counts = last_factor_counts<std::uint64_t>(spec, radius);
  std::uint64_t total = 1;  // identity
  for (std::uint32_t m = 1; m <= radius; ++m)
    for (std::size_t j = 0; j < spec.factor_count(); ++j) total = sat_add(total, counts[m][j]);
  return total;
}

std::vector<GroupElement> enumerate_ball(SpecPtr spec, std::uint32_t radius,
                                         const EnumerationLimits& limits) {
  const std::uint64_t projected = ball_size_bound(*spec, radius);
  if (projected > limits.max_elements)
    throw ResourceLimit("ball of radius " + std::to_string(radius) + " holds " +
                        (projected == kSaturated ? std::string(">10^19")
                                                 : std::to_string(projected)) +
                        " elements, over the cap of " + std::to_string(limits.max_elements));

  // Length-1 elements form the symmetric generating set; BFS levels are
  // then exactly the geodesic spheres.
  std::vector<GroupElement> generators;
  for (std::uint32_t j = 0; j < spec->factor_count(); ++j) {
    const std::uint64_t order = spec->factor(j).order;
    Syllable s{j, 1};
    generators.push_back(GroupElement::reduce(spec, std::span<const Syllable>(&s, 1)));
    if (order != 2) {
      Syllable inv{j, order == 0 ? -1 : static_cast<std::int64_t>(order) - 1};
      generators.push_back(GroupElement::reduce(spec, std::span<const Syllable>(&inv, 1)));
    }
  }

  std::unordered_set<GroupElement, ElementHash> seen;
  std::vector<GroupElement> all;
  std::vector<GroupElement> frontier{GroupElement::identity(spec)};
  seen.insert(frontier.front());
  all.push_back(frontier.front());
  for (std::uint32_t level = 1; level <= radius && !frontier.empty(); ++level) {
    std::vector<GroupElement> next;
    for (const GroupElement& v : frontier) {
      for (const GroupElement& g : generators) {
        GroupElement w = v.times(g);
        if (w.length() != level) continue;
        if (seen.insert(w).second) {
          next.push_back(w);
          all.push_back(std::move(w));
        }
      }
    }
    frontier = std::move(next);
  }

  std::vector<std::pair<std::string, std::size_t>> keys;
  keys.reserve(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) keys.emplace_back(all[i].word(), i);
  std::sort(keys.begin(), keys.end(), [&](const auto& a, const auto& b) {
    const auto la = all[a.second].length(), lb = all[b.second].length();
    if (la != lb) return la < lb;
    return a.first < b.first;
  });
  std::vector<GroupElement> sorted;
  sorted.reserve(all.size());
  for (const auto& [word, idx] : keys) sorted.push_back(all[idx]);
  return sorted;
}

std::string provenance_label(Provenance p, const std::string& detail) {
  switch (p) {
    case Provenance::enumerated:
      return "enumerated(" + detail + ")";
    case Provenance::closed_form:
      return "closed_form";
    case Provenance::synthetic:
      return "synthetic(" + detail + ")";
  }
  return "unknown";
}

ConjugacyProfile::ConjugacyProfile(std::optional<GroupElement> rep, std::string rep_word,
                                   std::string spec_hash, std::vector<BigNat> counts,
                                   Provenance prov, std::string detail)
    : rep_(std::move(rep)),
      rep_word_(std::move(rep_word)),
      spec_hash_(std::move(spec_hash)),
      counts_(std::move(counts)),
      prov_(prov),
      detail_(std::move(detail)) {
  if (counts_.empty()) counts_.emplace_back(0);
}

const BigNat& ConjugacyProfile::count(std::uint32_t l) const {
  static const BigNat zero(0);
  return l < counts_.size() ? counts_[l] : zero;
}

std::size_t ConjugacyProfile::nonzero_shells() const {
  std::size_t n = 0;
  for (const BigNat& c : counts_)
    if (!c.is_zero()) ++n;
  return n;
}

BigNat ConjugacyProfile::cumulative(std::uint32_t l) const {
  BigNat sum(0);
  for (std::uint32_t i = 0; i <= l && i < counts_.size(); ++i) sum += counts_[i];
  return sum;
}

ConjugacyProfile ConjugacyProfile::truncated(std::uint32_t radius) const {
  std::vector<BigNat> counts(counts_.begin(),
                             counts_.begin() + std::min<std::size_t>(radius + 1, counts_.size()));
  counts.resize(radius + 1, BigNat(0));
  std::string detail = detail_;
  if (prov_ == Provenance::enumerated) detail = "radius=" + std::to_string(radius);
  return ConjugacyProfile(rep_, rep_word_, spec_hash_, std::move(counts), prov_, detail);
}

bool ConjugacyProfile::operator==(const ConjugacyProfile& o) const {
  return rep_word_ == o.rep_word_ && spec_hash_ == o.spec_hash_ && counts_ == o.counts_ &&
         prov_ == o.prov_ && detail_ == o.detail_;
}

ConjugacyProfile conjugacy_shell_counts(const GroupElement& g, std::uint32_t radius,
                                        const EnumerationLimits& limits) {
  if (radius < g.length())
    throw InvalidParameter("profile radius " + std::to_string(radius) +
                           " is smaller than the representative length " +
                           std::to_string(g.length()));

  auto [core, conj] = g.cyclic_reduction();
  std::vector<BigNat> counts(radius + 1, BigNat(0));

  if (core.is_identity()) {
    counts[0] = BigNat(1);  // the identity is central
    return ConjugacyProfile(g, g.word(), g.spec()->hash_hex(), std::move(counts),
                            Provenance::enumerated, "radius=" + std::to_string(radius));
  }

  const std::uint32_t w_radius = conjugator_ball_radius(core, radius);
  std::vector<GroupElement> ball = enumerate_ball(g.spec(), w_radius, limits);

  // For a single-syllable core the centralizer is the core's own cyclic
  // factor, so conjugators ending in that factor only repeat shorter ones.
  const bool single = core.syllables().size() == 1;
  const std::uint32_t core_factor = single ? core.syllables()[0].factor : 0;

  const unsigned workers = std::max(1u, limits.workers);
  std::vector<std::vector<GroupElement>> found(workers);
  run_chunked(ball.size(), workers, [&](unsigned w, std::size_t begin, std::size_t end) {
    auto& local = found[w];
    for (std::size_t i = begin; i < end; ++i) {
      const GroupElement& conjugator = ball[i];
      if (single && !conjugator.is_identity() &&
          conjugator.syllables().back().factor == core_factor)
        continue;
      GroupElement c = core.conjugated_by(conjugator);
      if (c.length() <= radius) local.push_back(std::move(c));
    }
  });

  std::unordered_set<GroupElement, ElementHash> distinct;
  for (auto& chunk : found)
    for (auto& el : chunk) distinct.insert(std::move(el));
  for (const GroupElement& el : distinct) counts[el.length()] += BigNat(1);

  return ConjugacyProfile(g, g.word(), g.spec()->hash_hex(), std::move(counts),
                          Provenance::enumerated, "radius=" + std::to_string(radius));
}

ConjugacyProfile profile_from_formula(const GroupElement& g, std::uint32_t max_length,
                                      const EnumerationLimits& limits) {
  auto [core, conj] = g.cyclic_reduction();
  const auto& syl = core.syllables();
  if (syl.size() != 1 || g.spec()->factor(syl[0].factor).order == 0)
    throw UnsupportedClass("closed-form counting needs a single torsion syllable core; '" +
                           g.word() + "' does not qualify");
  const std::uint32_t core_factor = syl[0].factor;
  const std::uint32_t core_len = static_cast<std::uint32_t>(core.length());
  if (max_length < core_len)
    throw InvalidParameter("profile length bound " + std::to_string(max_length) +
                           " is below the core length " + std::to_string(core_len));

  // Conjugates correspond to cosets of the centralizer (the core's cyclic
  // factor); the unique shortest coset representatives are the normal
  // forms with no trailing syllable in that factor, and conjugation by a
  // representative of length m lands in the shell core_len + 2m.
  const std::uint32_t m_max = (max_length - core_len) / 2;
  auto counts_by_last = last_factor_counts<BigNat>(*g.spec(), m_max);
  std::vector<BigNat> counts(max_length + 1, BigNat(0));
  counts[core_len] = BigNat(1);  // empty conjugator
  for (std::uint32_t m = 1; m <= m_max; ++m) {
    BigNat total(0);
    for (std::size_t j = 0; j < g.spec()->factor_count(); ++j) {
      if (j == core_factor) continue;
      total += counts_by_last[m][j];
    }
    counts[core_len + 2 * m] = total;
  }

  ConjugacyProfile profile(g, g.word(), g.spec()->hash_hex(), std::move(counts),
                           Provenance::closed_form, "recurrence");

  // Mandatory cross-check against honest enumeration on the overlap.
  const std::uint32_t check_to =
      std::min<std::uint32_t>(max_length, std::max<std::uint32_t>(15, static_cast<std::uint32_t>(g.length())));
  ConjugacyProfile enumerated = conjugacy_shell_counts(g, check_to, limits);
  for (std::uint32_t l = 0; l <= check_to; ++l) {
    if (profile.count(l) != enumerated.count(l))
      throw Error("closed-form profile of '" + g.word() + "' disagrees with enumeration at shell " +
                  std::to_string(l) + ": " + profile.count(l).to_string() + " vs " +
                  enumerated.count(l).to_string());
  }
  return profile;
}

SyntheticSpec parse_synthetic(std::string_view text) {
  auto parse_u64 = [&](std::string_view part, const char* what) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || p != part.data() + part.size())
      throw InvalidParameter(std::string("synthetic profile: invalid ") + what + " in '" +
                             std::string(text) + "'");
    return v;
  };
  SyntheticSpec out;
  out.text = std::string(text);
  const auto caret = text.find('^');
  if (caret == std::string_view::npos) {
    out.kind = SyntheticSpec::Kind::constant;
    out.value = parse_u64(text, "constant");
    return out;
  }
  std::string_view lhs = text.substr(0, caret);
  std::string_view rhs = text.substr(caret + 1);
  if (rhs == "l") {
    out.kind = SyntheticSpec::Kind::exponential;
    out.value = parse_u64(lhs, "base");
    if (out.value < 2) throw InvalidParameter("synthetic profile: exponential base must be >= 2");
    return out;
  }
  if (lhs == "l") {
    out.kind = SyntheticSpec::Kind::polynomial;
    out.value = parse_u64(rhs, "degree");
    return out;
  }
  throw InvalidParameter("synthetic profile: expected '<base>^l', 'l^<k>' or a constant, got '" +
                         std::string(text) + "'");
}

ConjugacyProfile synthetic_profile(const SyntheticSpec& spec, std::uint32_t max_length) {
  std::vector<BigNat> counts(max_length + 1, BigNat(0));
  for (std::uint32_t l = 0; l <= max_length; ++l) {
    switch (spec.kind) {
      case SyntheticSpec::Kind::exponential:
        counts[l] = BigNat::power(spec.value, l);
        break;
      case SyntheticSpec::Kind::polynomial:
        counts[l] = BigNat::power(l, spec.value);
        break;
      case SyntheticSpec::Kind::constant:
        counts[l] = l == 0 ? BigNat(0) : BigNat(spec.value);
        break;
    }
  }
  return ConjugacyProfile(std::nullopt, "synthetic", "none", std::move(counts),
                          Provenance::synthetic, spec.text);
}

std::string growth_kind_label(GrowthVerdict::Kind kind) {
  switch (kind) {
    case GrowthVerdict::Kind::polynomial_bounded:
      return "POLYNOMIAL_BOUNDED";
    case GrowthVerdict::Kind::superpolynomial_evidence:
      return "SUPERPOLYNOMIAL_EVIDENCE";
    case GrowthVerdict::Kind::inconclusive:
      return "INCONCLUSIVE";
  }
  return "UNKNOWN";
}

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
  double r_squared = 1.0;
};

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  LineFit fit;
  const double denom = n * sxx - sx * sx;
  fit.slope = denom == 0.0 ? 0.0 : (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double mean_y = sy / n;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double pred = fit.intercept + fit.slope * xs[i];
    ss_res += (ys[i] - pred) * (ys[i] - pred);
    ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
  }
  fit.rms_residual = std::sqrt(ss_res / n);
  fit.r_squared = ss_tot == 0.0 ? 1.0 : std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
  return fit;
}

}  // namespace

GrowthVerdict classify_growth(const ConjugacyProfile& profile) {
  if (profile.nonzero_shells() < 8)
    throw InsufficientData("growth classification needs at least 8 nonzero shells, profile has " +
                           std::to_string(profile.nonzero_shells()));

  // Cumulative counts keep residue-class zero shells from breaking the
  // log fits.
  std::vector<double> log_l, raw_l, log_cum;
  BigNat cum(0);
  for (std::uint32_t l = 0; l <= profile.radius(); ++l) {
    cum += profile.count(l);
    if (l >= 1 && !cum.is_zero()) {
      log_l.push_back(std::log(static_cast<double>(l)));
      raw_l.push_back(static_cast<double>(l));
      log_cum.push_back(cum.log2() * std::log(2.0));
    }
  }
  if (log_l.size() < 2) throw InsufficientData("growth classification needs at least 2 data lengths");

  const LineFit poly = fit_line(log_l, log_cum);
  const LineFit expo = fit_line(raw_l, log_cum);

  GrowthVerdict verdict;
  verdict.fitted_degree = poly.slope;
  verdict.data_radius = profile.radius();
  const double gap = std::abs(poly.rms_residual - expo.rms_residual);
  const double scale = std::max(poly.rms_residual, expo.rms_residual);
  if (scale > 0.0 && gap <= 0.10 * scale) {
    verdict.kind = GrowthVerdict::Kind::inconclusive;
    verdict.fit_quality = std::max(poly.r_squared, expo.r_squared);
  } else if (poly.rms_residual <= expo.rms_residual) {
    verdict.kind = GrowthVerdict::Kind::polynomial_bounded;
    verdict.fit_quality = poly.r_squared;
  } else {
    verdict.kind = GrowthVerdict::Kind::superpolynomial_evidence;
    verdict.fit_quality = expo.r_squared;
  }
  return verdict;
}

bool count_exceeds_power(const BigNat& n, std::uint32_t l, double exponent) {
  if (n.is_zero()) return false;
  const double rounded = std::round(exponent);
  if (std::abs(exponent - rounded) < 1e-9 && rounded >= 0.0 && rounded <= 1e6) {
    return n > BigNat::power(l + 1, static_cast<std::uint64_t>(rounded));
  }
  return n.log2() > exponent * std::log2(static_cast<double>(l) + 1.0);
}

ShellSchedule find_shell_sequence(const ConjugacyProfile& profile, double exponent_base,
                                  std::size_t max_terms) {
  if (exponent_base <= 0.0) throw InvalidParameter("schedule exponent base must be > 0");
  ShellSchedule schedule;
  schedule.exponent_base = exponent_base;
  std::uint32_t l = 0;
  bool have_prev = false;
  while (schedule.indices.size() < max_terms) {
    const std::size_t i = schedule.indices.size() + 1;
    bool found = false;
    for (std::uint32_t cand = have_prev ? l + 1 : 0; cand <= profile.radius(); ++cand) {
      if (count_exceeds_power(profile.count(cand), cand,
                              exponent_base * static_cast<double>(i))) {
        schedule.indices.push_back(cand);
        schedule.counts.push_back(profile.count(cand));
        l = cand;
        have_prev = true;
        found = true;
        break;
      }
    }
    if (!found) break;
  }
  // Re-verify every selected index straight against the raw counts.
  for (std::size_t i = 0; i < schedule.indices.size(); ++i) {
    if (!count_exceeds_power(profile.count(schedule.indices[i]), schedule.indices[i],
                             exponent_base * static_cast<double>(i + 1)))
      throw Error("shell schedule re-verification failed at index " +
                  std::to_string(schedule.indices[i]));
  }
  return schedule;
}

std::string profile_to_csv(const ConjugacyProfile& profile) {
  std::ostringstream out;
  out << "# provenance=" << provenance_label(profile.provenance(), profile.provenance_detail())
      << ", spec_hash=" << profile.spec_hash() << ", class_rep=" << profile.representative_word()
      << "\n";
  out << "l,count\n";
  for (std::uint32_t l = 0; l <= profile.radius(); ++l)
    out << l << "," << profile.count(l).to_string() << "\n";
  return out.str();
}

namespace {

// "provenance=LABEL, spec_hash=HASH, class_rep=WORD"
void parse_profile_comment(std::string_view comment, Provenance& prov, std::string& detail,
                           std::string& spec_hash, std::string& rep_word) {
  auto field = [&](std::string_view key) -> std::string {
    const std::string needle = std::string(key) + "=";
    const auto at = comment.find(needle);
    if (at == std::string_view::npos)
      throw MalformedWord("profile CSV: comment line missing '" + std::string(key) + "'");
    std::size_t begin = at + needle.size();
    std::size_t end = comment.find(", ", begin);
    if (end == std::string_view::npos) end = comment.size();
    return std::string(comment.substr(begin, end - begin));
  };
  const std::string label = field("provenance");
  if (label.rfind("enumerated(", 0) == 0 && label.back() == ')') {
    prov = Provenance::enumerated;
    detail = label.substr(11, label.size() - 12);
  } else if (label == "closed_form") {
    prov = Provenance::closed_form;
    detail = "recurrence";
  } else if (label.rfind("synthetic(", 0) == 0 && label.back() == ')') {
    prov = Provenance::synthetic;
    detail = label.substr(10, label.size() - 11);
  } else {
    throw MalformedWord("profile CSV: unknown provenance '" + label + "'");
  }
  spec_hash = field("spec_hash");
  rep_word = field("class_rep");
}

}  // namespace

ConjugacyProfile profile_from_csv(std::string_view csv) {
  std::istringstream in{std::string(csv)};
  std::string line;
  Provenance prov = Provenance::enumerated;
  std::string detail, spec_hash, rep_word;
  bool saw_comment = false, saw_header = false;
  std::vector<BigNat> counts;
  std::uint32_t expected_l = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      parse_profile_comment(line, prov, detail, spec_hash, rep_word);
      saw_comment = true;
      continue;
    }
    if (!saw_header) {
      if (line != "l,count") throw MalformedWord("profile CSV: expected 'l,count' header");
      saw_header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw MalformedWord("profile CSV: expected 'l,count' row");
    std::uint32_t l = 0;
    auto [p, ec] = std::from_chars(line.data(), line.data() + comma, l);
    if (ec != std::errc() || p != line.data() + comma)
      throw MalformedWord("profile CSV: invalid length '" + line.substr(0, comma) + "'");
    if (l != expected_l)
      throw MalformedWord("profile CSV: rows must cover every length in order; got l=" +
                          std::to_string(l) + " expecting " + std::to_string(expected_l));
    counts.push_back(BigNat::parse(std::string_view(line).substr(comma + 1)));
    ++expected_l;
  }
  if (!saw_comment) throw MalformedWord("profile CSV: missing provenance comment");
  if (!saw_header || counts.empty()) throw MalformedWord("profile CSV: missing data rows");
  return ConjugacyProfile(std::nullopt, rep_word, spec_hash, std::move(counts), prov, detail);
}

}  // namespace tracesep
