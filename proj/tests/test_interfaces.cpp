#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "oracles.hpp"
#include "tracesep/cache.hpp"
#include "tracesep/errors.hpp"
#include "tracesep/growth.hpp"

using namespace tracesep;
using oracles::el;

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

CommandResult run_cli(const std::string& args) {
  const std::string cmd = std::string(TRACESEP_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CommandResult result;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) result.output.append(buf, n);
  const int status = pclose(pipe);
  result.exit_code = WEXITSTATUS(status);
  return result;
}

std::filesystem::path fresh_dir(const char* tag) {
  auto dir = std::filesystem::temp_directory_path() /
             (std::string("tracesep_test_") + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::filesystem::path write_group_file(const std::filesystem::path& dir, const char* name,
                                       const char* text) {
  auto path = dir / name;
  std::ofstream out(path);
  out << text;
  return path;
}

constexpr const char* kDinfText =
    "format_version = 1\ntype = free_product\nfactor = 2 a\nfactor = 2 b\n";
constexpr const char* kZ3zText =
    "format_version = 1\ntype = free_product\nfactor = 3 x\nfactor = 0 y\n";

}  // namespace

TEST_CASE("spec hash ignores comments and spacing, tracks content") {
  SpecPtr a = parse_group_spec(kDinfText);
  SpecPtr b = parse_group_spec(
      "# a comment\n  format_version   =  1\ntype = free_product\n\nfactor = 2 a\nfactor = 2 b\n");
  CHECK(a->hash_hex() == b->hash_hex());
  CHECK(a->canonical_text() == b->canonical_text());
  SpecPtr swapped = parse_group_spec(
      "format_version = 1\ntype = free_product\nfactor = 2 b\nfactor = 2 a\n");
  CHECK(a->hash_hex() != swapped->hash_hex());
}

TEST_CASE("profile cache round trip, truncation and spot checks") {
  auto dir = fresh_dir("cache");
  CacheConfig cache{dir};
  auto z3z = oracles::z3z();
  GroupElement x = el(z3z, "x:1");
  EnumerationLimits limits;

  CHECK_FALSE(cache_lookup(cache, x, Provenance::enumerated, 9, limits).has_value());

  ConjugacyProfile profile = conjugacy_shell_counts(x, 13);
  cache_store(cache, profile);

  // Exact-radius hit reproduces the profile bit for bit.
  auto hit = cache_lookup(cache, x, Provenance::enumerated, 13, limits);
  REQUIRE(hit.has_value());
  CHECK(hit->counts() == profile.counts());

  // A larger cached radius serves smaller requests, truncated.
  auto truncated = cache_lookup(cache, x, Provenance::enumerated, 9, limits);
  REQUIRE(truncated.has_value());
  CHECK(truncated->radius() == 9);
  CHECK(truncated->counts() == conjugacy_shell_counts(x, 9).counts());

  // Wrong provenance kind or class never hits.
  CHECK_FALSE(cache_lookup(cache, x, Provenance::closed_form, 9, limits).has_value());
  CHECK_FALSE(
      cache_lookup(cache, el(z3z, "x:2"), Provenance::enumerated, 9, limits).has_value());

  // A corrupted entry fails the spot check and is ignored (shell 1 is
  // always among the spot-checked shells).
  auto path = cache_file_name(cache, profile.spec_hash(), profile.representative_word(),
                              Provenance::enumerated, 13);
  std::string text = profile_to_csv(profile);
  const auto at = text.find("\n1,1\n");
  REQUIRE(at != std::string::npos);
  text.replace(at, 5, "\n1,9\n");
  {
    std::ofstream out(path, std::ios::trunc);
    out << text;
  }
  CHECK_FALSE(cache_lookup(cache, x, Provenance::enumerated, 9, limits).has_value());
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli: profile command writes the class CSV") {
  auto dir = fresh_dir("cli_profile");
  auto group = write_group_file(dir, "dinf.group", kDinfText);
  auto out_path = dir / "profile.csv";

  CommandResult res = run_cli("profile --group " + group.string() +
                              " --class-rep a:1 --radius 21 -o " + out_path.string());
  CHECK(res.exit_code == 0);
  std::ifstream in(out_path);
  std::string csv((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  ConjugacyProfile profile = profile_from_csv(csv);
  CHECK(profile.radius() == 21);
  // One reflection per odd length.
  for (std::uint32_t l = 0; l <= 21; ++l)
    CHECK(profile.count(l) == BigNat(l % 2 == 1 ? 1 : 0));
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli: profile of the identity class and the resource guard") {
  auto dir = fresh_dir("cli_guard");
  auto group = write_group_file(dir, "z3z.group", kZ3zText);
  auto out_path = dir / "e.csv";

  CommandResult res = run_cli("profile --group " + group.string() +
                              " --class-rep e --radius 0 -o " + out_path.string());
  CHECK(res.exit_code == 0);
  std::ifstream in(out_path);
  std::string csv((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(csv.find("l,count\n0,1\n") != std::string::npos);

  // Over the cap: exit 3 and no partial file.
  auto big_path = dir / "big.csv";
  CommandResult over = run_cli("profile --group " + group.string() +
                               " --class-rep x:1 --radius 45 --max-elements 1000 -o " +
                               big_path.string());
  CHECK(over.exit_code == 3);
  CHECK_FALSE(std::filesystem::exists(big_path));

  CommandResult cap = run_cli("profile --group " + group.string() +
                              " --class-rep x:1 --radius 200001 -o " + big_path.string());
  CHECK(cap.exit_code == 3);
  CHECK_FALSE(std::filesystem::exists(big_path));

  CommandResult summary = run_cli("profile --group " + group.string() +
                                  " --class-rep x:1 --radius 11 --format report");
  CHECK(summary.exit_code == 0);
  CHECK(summary.output.find("tracesep-profile/1") != std::string::npos);
  CHECK(summary.output.find("shell_11 = 94") != std::string::npos);
  CommandResult bad_format = run_cli("profile --group " + group.string() +
                                     " --class-rep x:1 --radius 11 --format xml");
  CHECK(bad_format.exit_code == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli: profile cache directory is honored") {
  auto dir = fresh_dir("cli_cache");
  auto group = write_group_file(dir, "z3z.group", kZ3zText);
  auto cache_dir = dir / "cache";

  CommandResult first = run_cli("profile --group " + group.string() +
                                " --class-rep x:1 --radius 11 --cache-dir " + cache_dir.string() +
                                " -o " + (dir / "a.csv").string());
  CHECK(first.exit_code == 0);
  CHECK(std::filesystem::exists(cache_dir));
  bool has_entry = false;
  for (const auto& entry : std::filesystem::directory_iterator(cache_dir))
    has_entry |= entry.path().extension() == ".csv";
  CHECK(has_entry);

  CommandResult second = run_cli("profile --group " + group.string() +
                                 " --class-rep x:1 --radius 9 --cache-dir " + cache_dir.string() +
                                 " -o " + (dir / "b.csv").string());
  CHECK(second.exit_code == 0);
  std::ifstream in(dir / "b.csv");
  std::string csv((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(profile_from_csv(csv).counts() == conjugacy_shell_counts(el(oracles::z3z(), "x:1"), 9).counts());
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli: trace-matrix exit codes and output") {
  auto dir = fresh_dir("cli_matrix");
  auto dinf = write_group_file(dir, "dinf.group", kDinfText);
  auto z3z = write_group_file(dir, "z3z.group", kZ3zText);

  CommandResult ok = run_cli("trace-matrix --group " + dinf.string() + " --witness a:1");
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.find("determinant = 1/2") != std::string::npos);
  CHECK(ok.output.find("matrix_verdict = SEPARABLE") != std::string::npos);

  CommandResult dup =
      run_cli("trace-matrix --group " + dinf.string() + " --witness a:1 --witness b:1");
  CHECK(dup.exit_code == 2);
  CHECK(dup.output.find("distinct-orders") != std::string::npos);

  CommandResult inf = run_cli("trace-matrix --group " + z3z.string() + " --witness y:1");
  CHECK(inf.exit_code == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli: counterexample exit codes") {
  auto dir = fresh_dir("cli_counter");
  auto dinf = write_group_file(dir, "dinf.group", kDinfText);

  CommandResult synth = run_cli("counterexample --synthetic 2^l --radius 200 -c 4 --s 3 --terms 5");
  CHECK(synth.exit_code == 0);
  CHECK(synth.output.find("term_5") != std::string::npos);
  CHECK(synth.output.find("trace_exceeds = term_") != std::string::npos);

  CommandResult empty = run_cli("counterexample --group " + dinf.string() +
                                " --class-rep a:1 --radius 40 --closed-form -c 4 --s 3");
  CHECK(empty.exit_code == 4);

  CommandResult bad = run_cli("counterexample --synthetic 2^l --radius 100 -c 0 --s 3");
  CHECK(bad.exit_code == 2);

  // Singleton shells never exceed (1+l)^(c*i), so the dihedral class has
  // no schedule for any c.
  CommandResult still_empty = run_cli("counterexample --group " + dinf.string() +
                                      " --class-rep a:1 --radius 9 -c 0.01 --s 2 --terms 2");
  CHECK(still_empty.exit_code == 4);

  // A small base on the Z/3 * Z class gives an honest schedule that is
  // cheap enough to materialize.
  auto z3z = write_group_file(dir, "z3z.group", kZ3zText);
  auto elem_path = dir / "xn.element";
  CommandResult mat = run_cli("counterexample --group " + z3z.string() +
                              " --class-rep x:1 --radius 9 -c 0.01 --s 2 --terms 2" +
                              " --materialize 2 --cap 100 --dump-element " + elem_path.string());
  CHECK(mat.exit_code == 0);
  CHECK(mat.output.find("materialized_support = 8") != std::string::npos);
  std::ifstream elem(elem_path);
  std::string elem_text((std::istreambuf_iterator<char>(elem)), std::istreambuf_iterator<char>());
  CHECK(elem_text.rfind("tracesep-algebra/1\nmode = float\n", 0) == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli: report runs end to end with byte-stable output") {
  auto dir = fresh_dir("cli_report");
  auto dinf = write_group_file(dir, "dinf.group", kDinfText);

  CommandResult once = run_cli("report --group " + dinf.string() +
                               " --witness a:1 --radius 60 --no-timestamp");
  CommandResult twice = run_cli("report --group " + dinf.string() +
                                " --witness a:1 --radius 60 --no-timestamp");
  CHECK(once.exit_code == 0);
  CHECK(once.output == twice.output);
  CHECK(once.output.find("verdict = SEPARABLE_BY_TRACES") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli: classify and counterexample read profile CSV files") {
  auto dir = fresh_dir("cli_profiles");
  auto z3z = write_group_file(dir, "z3z.group", kZ3zText);
  auto csv_path = dir / "x.csv";

  CommandResult make = run_cli("profile --group " + z3z.string() +
                               " --class-rep x:1 --radius 50 --closed-form -o " +
                               csv_path.string());
  REQUIRE(make.exit_code == 0);

  CommandResult classify = run_cli("classify --profile " + csv_path.string());
  CHECK(classify.exit_code == 0);
  CHECK(classify.output.find("growth = SUPERPOLYNOMIAL_EVIDENCE") != std::string::npos);
  CHECK(classify.output.find("provenance = closed_form") != std::string::npos);

  CommandResult counter =
      run_cli("counterexample --profile " + csv_path.string() + " -c 1 --s 2 --terms 2");
  CHECK(counter.exit_code == 0);
  CHECK(counter.output.find("term_2") != std::string::npos);

  // Too few nonzero shells for a growth verdict: parameter error.
  auto tiny_path = dir / "tiny.csv";
  CommandResult tiny_make = run_cli("profile --group " + z3z.string() +
                                    " --class-rep x:1 --radius 9 -o " + tiny_path.string());
  REQUIRE(tiny_make.exit_code == 0);
  CommandResult tiny = run_cli("classify --profile " + tiny_path.string());
  CHECK(tiny.exit_code == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli: verify fault injection fails by name") {
  CommandResult sabotage = run_cli("verify --seed 3 --fault-inject idempotency");
  CHECK(sabotage.exit_code == 1);
  CHECK(sabotage.output.find("FAIL algebra.idempotency_exact") != std::string::npos);
  CHECK(sabotage.output.find("result = FAIL") != std::string::npos);
}
