#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include "normeq/io.hpp"

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string stdout_bytes;
};

std::string cli_path() {
  const char* path = std::getenv("NORMEQ_CLI");
  REQUIRE_MESSAGE(path != nullptr, "NORMEQ_CLI must point at the built binary");
  return path;
}

fs::path golden_dir() {
  const char* path = std::getenv("NORMEQ_GOLDEN_DIR");
  REQUIRE_MESSAGE(path != nullptr, "NORMEQ_GOLDEN_DIR must point at tests/golden");
  return fs::path(path);
}

// Runs the CLI from the golden inputs directory so reports stay path-stable.
RunResult run_cli(const std::string& args) {
  const std::string command =
      "cd '" + (golden_dir() / "inputs").string() + "' && '" + cli_path() + "' " + args +
      " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  std::array<char, 4096> buffer;
  std::size_t count = 0;
  while ((count = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    result.stdout_bytes.append(buffer.data(), count);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

void check_against_golden(const std::string& args, const std::string& fixture,
                          int expected_exit) {
  const RunResult first = run_cli(args);
  const RunResult second = run_cli(args);
  CHECK_MESSAGE(first.exit_code == expected_exit, "args: ", args);
  // Byte-identical across consecutive runs.
  CHECK(first.stdout_bytes == second.stdout_bytes);
  const fs::path expected_path = golden_dir() / "expected" / fixture;
  REQUIRE_MESSAGE(fs::exists(expected_path), "missing fixture ", fixture);
  CHECK_MESSAGE(first.stdout_bytes == normeq::read_file(expected_path),
                "fixture mismatch for ", fixture);
}

}  // namespace

TEST_CASE("equiv discriminates multiplicity profiles") {
  check_against_golden("equiv diag112.json diag122.json", "equiv_diag112_diag122.json", 1);
}

TEST_CASE("equiv produces a witness for conjugate operators") {
  check_against_golden("equiv diag12.json rot.json", "equiv_diag12_rot.json", 0);
}

TEST_CASE("normality flags the Jordan block") {
  check_against_golden("normality nilpotent.json", "normality_nilpotent.json", 1);
}

TEST_CASE("invariants reports atoms with labels") {
  check_against_golden("invariants diag112.json", "invariants_diag112.json", 0);
}

TEST_CASE("cayley maps the zero operator to minus one") {
  check_against_golden("cayley zero1x1.json", "cayley_zero1x1.json", 0);
}

TEST_CASE("cayley inverse returns the original") {
  check_against_golden("cayley --inverse minus1x1.json", "cayley_inverse_minus1x1.json", 0);
}

TEST_CASE("sb passes on the identity pipeline") {
  check_against_golden("sb diag12.json diag12.json ident2.json ident2.json",
                       "sb_identity.json", 0);
}

TEST_CASE("sb rejects a corrupted intertwiner naming the stage") {
  check_against_golden("sb diag12.json diag12.json swap2.json swap2.json",
                       "sb_rejected_swap.json", 1);
}

TEST_CASE("fuglede reports the nilpotent counterexample") {
  check_against_golden("fuglede nilpotent.json nilpotent.json nilpotent.json",
                       "fuglede_nilpotent.json", 0);
}

TEST_CASE("axioms scores the reference bundle") {
  check_against_golden("axioms bundle_identity/manifest.json", "axioms_identity.json", 0);
}

TEST_CASE("ortho verifies the aligned nested pair") {
  check_against_golden("ortho bundle_sub/manifest.json bundle_sup/manifest.json",
                       "ortho_aligned.json", 0);
}

TEST_CASE("sandwich concludes on the squeeze instance") {
  check_against_golden("sandwich h.json v.json w.json", "sandwich_squeeze.json", 0);
}

TEST_CASE("sandwich reports premise violations") {
  check_against_golden("sandwich h.json v.json w_short.json", "sandwich_violation.json", 1);
}

TEST_CASE("invalid input exits with code two and an error document") {
  const RunResult result = run_cli("normality missing-file.json");
  CHECK(result.exit_code == 2);
  CHECK(result.stdout_bytes.find("\"verdict\":\"error\"") != std::string::npos);

  const RunResult malformed = run_cli("equiv truncated.json diag12.json");
  CHECK(malformed.exit_code == 2);
  CHECK(malformed.stdout_bytes.find("parse-error") != std::string::npos);

  const RunResult non_square = run_cli("normality rect.json");
  CHECK(non_square.exit_code == 2);
  CHECK(non_square.stdout_bytes.find("non-square") != std::string::npos);
}

TEST_CASE("numeric guards exit with code three") {
  const RunResult result = run_cli("invariants chain.json");
  CHECK(result.exit_code == 3);
  CHECK(result.stdout_bytes.find("cluster-ambiguity") != std::string::npos);
}

TEST_CASE("tolerance flags reach the engine") {
  // With a huge clustering radius both spectra collapse to one atom of
  // multiplicity two, and the loosened residual gate accepts the witness.
  const RunResult strict = run_cli("equiv diag12.json diag13.json");
  CHECK(strict.exit_code == 1);
  const RunResult loose =
      run_cli("--cluster-tol 2.0 --residual-tol 2.0 equiv diag12.json diag13.json");
  CHECK(loose.exit_code == 0);
  const RunResult invalid = run_cli("--cluster-tol -1 equiv diag12.json diag13.json");
  CHECK(invalid.exit_code == 2);
}

TEST_CASE("text format renders without disturbing exit codes") {
  const RunResult result = run_cli("--format text normality nilpotent.json");
  CHECK(result.exit_code == 1);
  CHECK(result.stdout_bytes.find("verdict: fail") != std::string::npos);
}

TEST_CASE("the out flag duplicates the report to a file") {
  const fs::path out_path = fs::temp_directory_path() / "normeq-cli-out-test.json";
  std::error_code ec;
  fs::remove(out_path, ec);
  const RunResult result =
      run_cli("--out '" + out_path.string() + "' normality diag12.json");
  CHECK(result.exit_code == 0);
  REQUIRE(fs::exists(out_path));
  CHECK(normeq::read_file(out_path) == result.stdout_bytes);
  fs::remove(out_path, ec);
}
