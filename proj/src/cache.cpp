#include "tracesep/cache.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "tracesep/errors.hpp"

namespace tracesep {

namespace {

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

char kind_tag(Provenance kind) { return kind == Provenance::enumerated ? 'e' : 'c'; }

}  // namespace

std::filesystem::path cache_file_name(const CacheConfig& config, const std::string& spec_hash,
                                      const std::string& rep_word, Provenance kind,
                                      std::uint32_t radius) {
  std::ostringstream name;
  name << spec_hash << "_" << hex16(fnv1a(rep_word)) << "_" << kind_tag(kind) << "_r" << radius
       << ".csv";
  return config.dir / name.str();
}

std::optional<ConjugacyProfile> cache_lookup(const CacheConfig& config, const GroupElement& rep,
                                             Provenance kind, std::uint32_t radius,
                                             const EnumerationLimits& limits) {
  if (!config.enabled() || !std::filesystem::is_directory(config.dir)) return std::nullopt;
  const std::string prefix =
      rep.spec()->hash_hex() + "_" + hex16(fnv1a(rep.word())) + "_" + kind_tag(kind) + "_r";

  std::uint32_t best_radius = 0;
  std::filesystem::path best;
  for (const auto& entry : std::filesystem::directory_iterator(config.dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind(prefix, 0) != 0 || name.size() < prefix.size() + 5) continue;
    std::string_view tail(name);
    tail.remove_prefix(prefix.size());
    if (tail.size() < 4 || tail.substr(tail.size() - 4) != ".csv") continue;
    tail.remove_suffix(4);
    std::uint32_t r = 0;
    auto [p, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), r);
    if (ec != std::errc() || p != tail.data() + tail.size()) continue;
    if (r >= radius && (best.empty() || r < best_radius)) {
      best_radius = r;
      best = entry.path();
    }
  }
  if (best.empty()) return std::nullopt;

  std::ifstream in(best);
  if (!in) return std::nullopt;
  std::stringstream buf;
  buf << in.rdbuf();
  std::optional<ConjugacyProfile> cached;
  try {
    cached = profile_from_csv(buf.str());
  } catch (const Error&) {
    return std::nullopt;  // corrupted entry: fall back to recomputing
  }
  if (cached->spec_hash() != rep.spec()->hash_hex() || cached->representative_word() != rep.word())
    return std::nullopt;

  // Spot-check three shells against a fresh enumeration before trusting
  // the file.
  const std::uint32_t check_radius =
      std::min<std::uint32_t>(radius, std::max<std::uint32_t>(13, static_cast<std::uint32_t>(rep.length())));
  ConjugacyProfile fresh = conjugacy_shell_counts(rep, check_radius, limits);
  std::vector<std::uint32_t> spots;
  for (std::uint32_t l = 0; l <= check_radius && spots.size() < 1; ++l)
    if (!fresh.count(l).is_zero()) spots.push_back(l);
  spots.push_back(check_radius / 2);
  spots.push_back(check_radius);
  for (std::uint32_t l : spots) {
    if (cached->count(l) != fresh.count(l)) return std::nullopt;
  }

  ConjugacyProfile truncated = cached->truncated(radius);
  return ConjugacyProfile(rep, rep.word(), rep.spec()->hash_hex(), truncated.counts(),
                          truncated.provenance(), truncated.provenance_detail());
}

void cache_store(const CacheConfig& config, const ConjugacyProfile& profile) {
  if (!config.enabled()) return;
  std::filesystem::create_directories(config.dir);
  const auto path = cache_file_name(config, profile.spec_hash(), profile.representative_word(),
                                    profile.provenance(), profile.radius());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error("cannot write cache file " + tmp);
    out << profile_to_csv(profile);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace tracesep
