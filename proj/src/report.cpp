#include "tracesep/report.hpp"

#include <cstdio>
#include <ctime>
#include <sstream>

namespace tracesep {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string iso8601_now() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string render_trace_matrix(const TraceMatrix& matrix) {
  std::ostringstream out;
  out << "size = " << matrix.dimension() << "\n";
  out << "witnesses =";
  for (const auto& [g, d] : matrix.witnesses) out << " " << g.word() << "(order=" << d << ")";
  out << "\n";
  for (std::size_t i = 0; i < matrix.dimension(); ++i) {
    out << "row_" << i << " =";
    for (const Rational& e : matrix.entries[i]) out << " " << e.to_string();
    out << "\n";
  }
  out << "determinant = " << matrix.determinant.to_string() << "\n";
  out << "matrix_verdict = "
      << (matrix.verdict == TraceMatrix::Verdict::separable ? "SEPARABLE" : "NOT_SHOWN") << "\n";
  return out.str();
}

std::string render_growth_verdict(const GrowthVerdict& verdict, const std::string& indent) {
  std::ostringstream out;
  out << indent << "growth = " << growth_kind_label(verdict.kind) << "\n";
  out << indent << "fitted_degree = " << fmt_double(verdict.fitted_degree) << "\n";
  out << indent << "fit_quality = " << fmt_double(verdict.fit_quality) << "\n";
  out << indent << "data_radius = " << verdict.data_radius << "\n";
  return out.str();
}

std::string render_divergence(const DivergenceReport& report, const std::string& indent) {
  std::ostringstream out;
  out << indent << "provenance = " << provenance_label(report.provenance, report.provenance_detail)
      << "\n";
  out << indent << "truncation = by schedule position\n";
  out << indent << "sobolev_s = " << fmt_double(report.sobolev_s) << "\n";
  out << indent << "exponent_base = " << fmt_double(report.exponent_base) << "\n";
  out << indent << "terms = " << report.shell_indices.size() << "\n";
  for (std::size_t i = 0; i < report.shell_indices.size(); ++i) {
    out << indent << "term_" << (i + 1) << " = l=" << report.shell_indices[i]
        << " count=" << report.shell_counts[i].to_string()
        << " norm_partial=" << fmt_double(report.norm_partials[i])
        << " trace_partial=" << fmt_double(report.trace_partials[i]) << "\n";
  }
  out << indent << "norm_tail_bound = " << fmt_double(report.norm_tail_bound) << "\n";
  out << indent << "trace_threshold = " << fmt_double(report.trace_threshold) << "\n";
  if (report.threshold_reached)
    out << indent << "trace_exceeds = term_" << report.threshold_term << "\n";
  else
    out << indent << "trace_exceeds = NOT_REACHED\n";
  return out.str();
}

std::string render_separability(const SeparabilityReport& report, const RenderOptions& options) {
  std::ostringstream out;
  out << "report_format = tracesep/1\n";
  out << "tool_version = " << kToolVersion << "\n";
  if (options.timestamp) out << "generated_at = " << iso8601_now() << "\n";
  out << "group_spec_hash = " << report.spec->hash_hex() << "\n";
  out << "radius = " << report.options.radius << "\n";
  out << "sobolev_s = " << fmt_double(report.options.sobolev_s) << "\n";
  out << "exponent_base = " << fmt_double(report.options.exponent_base) << "\n";
  out << "verdict = " << separability_verdict_label(report.verdict) << "\n";
  out << "witness_count = " << report.witnesses.size() << "\n";

  for (std::size_t w = 0; w < report.witnesses.size(); ++w) {
    const WitnessEvidence& ev = report.witnesses[w];
    out << "[witness " << (w + 1) << "]\n";
    out << "  element = " << ev.witness.word() << "\n";
    out << "  order = " << ev.order << "\n";
    out << "  obstruction_shown = " << (ev.obstruction_shown ? "yes" : "no") << "\n";
    for (const ClassEvidence& ce : ev.classes) {
      out << "  [class t=" << ce.power << "]\n";
      out << "    representative = " << ce.representative.word() << "\n";
      out << "    provenance = " << provenance_label(ce.provenance, ce.provenance_detail) << "\n";
      out << "    profile_radius = " << ce.profile_radius << "\n";
      out << render_growth_verdict(ce.growth, "    ");
      if (ce.schedule) {
        out << "    schedule_indices =";
        for (std::uint32_t l : ce.schedule->indices) out << " " << l;
        out << "\n";
      }
      if (ce.divergence) {
        out << "    [divergence]\n";
        out << render_divergence(*ce.divergence, "      ");
      }
    }
  }

  if (report.matrix) {
    out << "[matrix]\n";
    std::istringstream lines(render_trace_matrix(*report.matrix));
    std::string line;
    while (std::getline(lines, line)) out << "  " << line << "\n";
  }
  return out.str();
}

}  // namespace tracesep
