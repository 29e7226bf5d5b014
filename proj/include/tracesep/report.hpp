#pragma once

#include <string>

#include "tracesep/traces.hpp"

namespace tracesep {

inline constexpr std::string_view kToolVersion = "1.0.0";

struct RenderOptions {
  bool timestamp = true;  // --no-timestamp makes reports byte-reproducible
};

/// Key-value rendering of the exact matrix, entries as reduced rationals.
std::string render_trace_matrix(const TraceMatrix& matrix);

/// Partial-sum table plus the tail bound, one term per line.
std::string render_divergence(const DivergenceReport& report, const std::string& indent = "");

/// The full structured verdict document (stable field names).
std::string render_separability(const SeparabilityReport& report, const RenderOptions& options);

std::string render_growth_verdict(const GrowthVerdict& verdict, const std::string& indent = "");

}  // namespace tracesep
