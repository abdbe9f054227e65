// Acceptance harness: one PASS/FAIL line per criterion.
//
//   acceptance <path-to-doifbp-cli> [scratch-dir]

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "doifbp/checks.hpp"

using namespace doifbp;
namespace fs = std::filesystem;

namespace {

void report(const CheckResult& r) {
  std::printf("[%s] criterion %d: %s (%.1f s", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds);
  if (r.budget_seconds > 0.0) std::printf(", budget %.0f s", r.budget_seconds);
  std::printf("): %s\n", r.detail.c_str());
  std::fflush(stdout);
}

int run_cli_check(const std::string& cli, const fs::path& scratch) {
  const std::string cmd = "\"" + cli + "\" --quiet check --scratch \"" + (scratch / "cli").string() + "\"";
  const int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <doifbp-cli> [scratch-dir]\n", argv[0]);
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path scratch = argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path() / "doifbp-acceptance";
  fs::create_directories(scratch);

  bool all = true;
  for (int id = 1; id <= 7; ++id) {
    const CheckResult r = run_check(id, scratch.string());
    all = all && r.passed;
    report(r);
  }

  CheckResult replay = run_check(8, scratch.string());
  const int code = run_cli_check(cli, scratch);
  replay.passed = replay.passed && code == 0;
  replay.detail += "; `check` subcommand exit code " + std::to_string(code);
  all = all && replay.passed;
  report(replay);
  return all ? 0 : 1;
}
