#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "tracesep/cache.hpp"
#include "tracesep/errors.hpp"
#include "tracesep/report.hpp"
#include "tracesep/traces.hpp"
#include "tracesep/verify.hpp"

namespace {

using namespace tracesep;

// Exit codes are a stable contract:
//   0 success (trace-matrix: SEPARABLE)
//   1 verification failure or unexpected error
//   2 spec/parameter errors
//   3 resource limits
//   4 counterexample: empty schedule (no obstruction evidence at this radius)
//  10 trace-matrix: NOT_SHOWN

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// "-" means stdout; files are written atomically (temp + rename) so a
/// failing run leaves no partial output behind.
void write_output(const std::string& path, const std::string& content) {
  if (path == "-" || path.empty()) {
    std::cout << content;
    return;
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error("cannot write output file '" + path + "'");
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

constexpr std::uint32_t kRadiusCap = 100000;

void check_radius_cap(std::uint32_t radius) {
  if (radius > kRadiusCap)
    throw ResourceLimit("radius " + std::to_string(radius) + " exceeds the cap of " +
                        std::to_string(kRadiusCap));
}

struct ProfileSource {
  std::string group_path;
  std::string class_rep;
  std::string profile_path;
  std::string synthetic;
  std::uint32_t radius = 0;
  bool closed_form = false;
  unsigned workers = 1;
  std::uint64_t max_elements = 4'000'000;
};

/// Resolve a profile from --profile, --synthetic or --group/--class-rep.
ConjugacyProfile resolve_profile(const ProfileSource& src, std::optional<GroupElement>* rep_out) {
  if (!src.profile_path.empty()) return profile_from_csv(read_file(src.profile_path));
  if (!src.synthetic.empty()) {
    check_radius_cap(src.radius);
    return synthetic_profile(parse_synthetic(src.synthetic), src.radius);
  }
  if (src.group_path.empty() || src.class_rep.empty())
    throw InvalidParameter("a profile source is required: --profile, --synthetic or --group with --class-rep");
  check_radius_cap(src.radius);
  SpecPtr spec = parse_group_spec(read_file(src.group_path));
  GroupElement rep = GroupElement::parse(spec, src.class_rep);
  if (rep_out) *rep_out = rep;
  EnumerationLimits limits{src.max_elements, src.workers};
  return src.closed_form ? profile_from_formula(rep, src.radius, limits)
                         : conjugacy_shell_counts(rep, src.radius, limits);
}

int cmd_profile(const ProfileSource& src, const std::string& cache_dir, const std::string& format,
                const std::string& output) {
  check_radius_cap(src.radius);
  SpecPtr spec = parse_group_spec(read_file(src.group_path));
  GroupElement rep = GroupElement::parse(spec, src.class_rep);
  EnumerationLimits limits{src.max_elements, src.workers};
  const Provenance kind = src.closed_form ? Provenance::closed_form : Provenance::enumerated;
  if (format != "csv" && format != "report")
    throw InvalidParameter("output format must be 'csv' or 'report', got '" + format + "'");

  CacheConfig cache{cache_dir};
  std::optional<ConjugacyProfile> profile;
  if (cache.enabled()) profile = cache_lookup(cache, rep, kind, src.radius, limits);
  if (!profile) {
    profile = src.closed_form ? profile_from_formula(rep, src.radius, limits)
                              : conjugacy_shell_counts(rep, src.radius, limits);
    if (cache.enabled()) cache_store(cache, *profile);
  }
  if (format == "csv") {
    write_output(output, profile_to_csv(*profile));
    return 0;
  }
  std::ostringstream out;
  out << "tracesep-profile/1\n";
  out << "provenance = " << provenance_label(profile->provenance(), profile->provenance_detail())
      << "\n";
  out << "spec_hash = " << profile->spec_hash() << "\n";
  out << "class_rep = " << profile->representative_word() << "\n";
  out << "radius = " << profile->radius() << "\n";
  out << "nonzero_shells = " << profile->nonzero_shells() << "\n";
  out << "class_ball_size = " << profile->cumulative(profile->radius()).to_string() << "\n";
  for (std::uint32_t l = 0; l <= profile->radius(); ++l)
    if (!profile->count(l).is_zero())
      out << "shell_" << l << " = " << profile->count(l).to_string() << "\n";
  write_output(output, out.str());
  return 0;
}

int cmd_classify(const ProfileSource& src, const std::string& output) {
  ConjugacyProfile profile = resolve_profile(src, nullptr);
  GrowthVerdict verdict = classify_growth(profile);
  std::ostringstream out;
  out << "tracesep-classify/1\n";
  out << "provenance = " << provenance_label(profile.provenance(), profile.provenance_detail())
      << "\n";
  out << "class_rep = " << profile.representative_word() << "\n";
  out << render_growth_verdict(verdict);
  write_output(output, out.str());
  return 0;
}

int cmd_trace_matrix(const std::string& group_path, const std::vector<std::string>& witness_words,
                     const std::string& output) {
  SpecPtr spec = parse_group_spec(read_file(group_path));
  std::vector<GroupElement> witnesses;
  for (const std::string& w : witness_words) witnesses.push_back(GroupElement::parse(spec, w));
  TraceMatrix matrix = trace_matrix(spec, witnesses);
  std::ostringstream out;
  out << "tracesep-matrix/1\n";
  out << "group_spec_hash = " << spec->hash_hex() << "\n";
  out << render_trace_matrix(matrix);
  write_output(output, out.str());
  return matrix.verdict == TraceMatrix::Verdict::separable ? 0 : 10;
}

int cmd_counterexample(const ProfileSource& src, double base, double sobolev_s, std::size_t terms,
                       double threshold, std::size_t materialize_shells, std::uint64_t shell_cap,
                       const std::string& dump_element, const std::string& output) {
  if (base <= 0.0) throw InvalidParameter("exponent base must be > 0");
  if (sobolev_s < 0.0) throw InvalidParameter("sobolev exponent s must be >= 0");
  if (terms < 1) throw InvalidParameter("terms must be >= 1");

  std::optional<GroupElement> rep;
  ConjugacyProfile profile = resolve_profile(src, &rep);
  ShellSchedule schedule = find_shell_sequence(profile, base, terms);
  if (schedule.empty()) {
    std::cerr << "no shell satisfies n_l > (1+l)^(c*i) at this radius; no obstruction evidence\n";
    return 4;
  }
  DivergenceReport report = counterexample_partial_sums(profile, schedule, sobolev_s, terms, threshold);

  std::ostringstream out;
  out << "tracesep-counterexample/1\n";
  out << render_divergence(report);
  if (materialize_shells > 0) {
    if (!rep) throw InvalidParameter("--materialize needs a --group/--class-rep profile source");
    EnumerationLimits limits{src.max_elements, src.workers};
    AlgebraElement x_n =
        materialize_counterexample(*rep, schedule, materialize_shells, shell_cap, limits);
    out << "materialized_support = " << x_n.support_size() << "\n";
    out << "materialized_norm_sq = ";
    {
      char buf[64];
      const double v = std::pow(sobolev_norm(x_n, {sobolev_s}), 2.0);
      std::snprintf(buf, sizeof buf, "%.12g", v);
      out << buf << "\n";
    }
    if (!dump_element.empty()) {
      std::ostringstream elem;
      save_algebra_element(elem, x_n);
      write_output(dump_element, elem.str());
    }
  }
  write_output(output, out.str());
  return 0;
}

int cmd_report(const std::string& group_path, const std::vector<std::string>& witness_words,
               const SeparabilityOptions& options, bool no_timestamp, const std::string& output) {
  check_radius_cap(options.radius);
  SpecPtr spec = parse_group_spec(read_file(group_path));
  std::vector<GroupElement> witnesses;
  for (const std::string& w : witness_words) witnesses.push_back(GroupElement::parse(spec, w));
  SeparabilityReport report = separability_report(spec, witnesses, options);
  write_output(output, render_separability(report, RenderOptions{!no_timestamp}));
  return 0;
}

int cmd_verify(std::uint64_t seed, unsigned workers, unsigned scale,
               const std::string& fault_inject) {
  VerifyResult result = run_verification(VerifyOptions{seed, workers, scale, fault_inject});
  std::cout << result.transcript;
  return result.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tracesep: trace separation of torsion idempotents in group algebras of free products of cyclic groups"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  const char* env_cache = std::getenv("TRACESEP_CACHE_DIR");
  std::string cache_dir = env_cache ? env_cache : "";
  std::string output = "-";

  ProfileSource src;
  double base = 4.0, sobolev_s = 3.0, threshold = 1e6;
  std::size_t terms = 8, materialize_shells = 0;
  std::uint64_t shell_cap = 100000;
  std::string dump_element;
  std::vector<std::string> witness_words;
  bool no_timestamp = false;
  std::uint64_t seed = 1;
  unsigned workers = 1, scale = 1;
  std::string fault_inject;

  auto add_source = [&](CLI::App* cmd, bool with_alternatives) {
    cmd->add_option("--group", src.group_path, "group spec document");
    cmd->add_option("--class-rep", src.class_rep, "class representative word, e.g. 'x:1'");
    cmd->add_option("--radius", src.radius, "profile radius (max length)");
    cmd->add_flag("--closed-form", src.closed_form,
                  "use the closed-form recurrence (cross-checked against enumeration)");
    cmd->add_option("--workers", src.workers, "enumeration worker threads");
    cmd->add_option("--max-elements", src.max_elements, "enumeration size cap");
    if (with_alternatives) {
      cmd->add_option("--profile", src.profile_path, "existing profile CSV");
      cmd->add_option("--synthetic", src.synthetic,
                      "synthetic shell counts: '<base>^l', 'l^<k>' or a constant");
    }
  };

  std::string format = "csv";
  CLI::App* profile = app.add_subcommand("profile", "conjugacy-class shell counts to CSV");
  add_source(profile, false);
  profile->add_option("--cache-dir", cache_dir, "profile cache directory (env TRACESEP_CACHE_DIR)");
  profile->add_option("--format", format, "output format: csv or report");
  profile->add_option("--output,-o", output, "output path, '-' for stdout");

  CLI::App* classify = app.add_subcommand("classify", "growth classification of a profile");
  add_source(classify, true);
  classify->add_option("--output,-o", output, "output path, '-' for stdout");

  CLI::App* matrix = app.add_subcommand("trace-matrix", "exact trace-matrix certificate");
  matrix->add_option("--group", src.group_path, "group spec document")->required();
  matrix->add_option("--witness", witness_words, "torsion witness word (repeatable)")->required();
  matrix->add_option("--output,-o", output, "output path, '-' for stdout");

  CLI::App* counter = app.add_subcommand("counterexample",
                                         "shell schedule and divergence partial sums");
  add_source(counter, true);
  counter->add_option("--base,-c", base, "schedule exponent base c");
  counter->add_option("--s", sobolev_s, "Sobolev exponent s");
  counter->add_option("--terms", terms, "number of schedule terms");
  counter->add_option("--threshold", threshold, "trace partial-sum threshold");
  counter->add_option("--materialize", materialize_shells,
                      "materialize the first N schedule shells as an algebra element");
  counter->add_option("--cap", shell_cap, "per-shell element cap for materialization");
  counter->add_option("--dump-element", dump_element, "write the materialized element to a file");
  counter->add_option("--output,-o", output, "output path, '-' for stdout");

  CLI::App* report = app.add_subcommand("report", "composite separability verdict");
  report->add_option("--group", src.group_path, "group spec document")->required();
  report->add_option("--witness", witness_words, "torsion witness word (repeatable)");
  report->add_option("--radius", src.radius, "profile radius")->default_val(240);
  report->add_option("--s", sobolev_s, "Sobolev exponent s");
  report->add_option("--base,-c", base, "schedule exponent base c");
  report->add_option("--terms", terms, "number of schedule terms");
  report->add_option("--threshold", threshold, "trace partial-sum threshold");
  report->add_option("--workers", src.workers, "enumeration worker threads");
  report->add_flag("--no-timestamp", no_timestamp, "omit the generated_at line");
  report->add_option("--output,-o", output, "output path, '-' for stdout");

  CLI::App* verify = app.add_subcommand("verify", "run the invariant suites");
  verify->add_option("--seed", seed, "PRNG seed (recorded in the transcript)");
  verify->add_option("--workers", workers, "enumeration worker threads");
  verify->add_option("--scale", scale, "case-count multiplier");
  verify->add_option("--fault-inject", fault_inject, "test hook: name a check to sabotage");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (profile->parsed()) return cmd_profile(src, cache_dir, format, output);
    if (classify->parsed()) return cmd_classify(src, output);
    if (matrix->parsed()) return cmd_trace_matrix(src.group_path, witness_words, output);
    if (counter->parsed())
      return cmd_counterexample(src, base, sobolev_s, terms, threshold, materialize_shells,
                                shell_cap, dump_element, output);
    if (report->parsed()) {
      SeparabilityOptions options;
      options.radius = src.radius;
      options.sobolev_s = sobolev_s;
      options.exponent_base = base;
      options.schedule_terms = terms;
      options.trace_threshold = threshold;
      options.limits = EnumerationLimits{src.max_elements, src.workers};
      return cmd_report(src.group_path, witness_words, options, no_timestamp, output);
    }
    if (verify->parsed()) return cmd_verify(seed, workers, scale, fault_inject);
  } catch (const ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
