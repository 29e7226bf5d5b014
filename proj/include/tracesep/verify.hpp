#pragma once

#include <cstdint>
#include <string>

namespace tracesep {

/**
 * Deterministic invariant suite over the bundled groups (infinite
 * dihedral, Z/3 * Z, Z/2 * Z/3). Same seed, same transcript, regardless
 * of worker count. fault_inject is a test hook: "idempotency" corrupts
 * one idempotent coefficient so the suite must fail by that name.
 */
struct VerifyOptions {
  std::uint64_t seed = 1;
  unsigned workers = 1;
  unsigned scale = 1;
  std::string fault_inject;
};

struct VerifyResult {
  bool passed = false;
  std::string transcript;
};

VerifyResult run_verification(const VerifyOptions& options);

}  // namespace tracesep
