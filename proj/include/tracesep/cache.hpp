#pragma once

#include <filesystem>
#include <optional>

#include "tracesep/growth.hpp"

namespace tracesep {

/// Profile cache: one CSV per (spec hash, class rep, provenance kind,
/// radius). An empty directory path disables caching.
struct CacheConfig {
  std::filesystem::path dir;
  bool enabled() const { return !dir.empty(); }
};

std::filesystem::path cache_file_name(const CacheConfig& config, const std::string& spec_hash,
                                      const std::string& rep_word, Provenance kind,
                                      std::uint32_t radius);

/**
 * Look for a cached profile of the same class and kind with radius >=
 * requested. A hit is re-verified by recomputing three low shells by
 * enumeration before it is trusted; a corrupted entry is ignored (and
 * the caller recomputes). The returned profile is truncated to the
 * requested radius and carries the caller's representative.
 */
std::optional<ConjugacyProfile> cache_lookup(const CacheConfig& config, const GroupElement& rep,
                                             Provenance kind, std::uint32_t radius,
                                             const EnumerationLimits& limits);

void cache_store(const CacheConfig& config, const ConjugacyProfile& profile);

}  // namespace tracesep
