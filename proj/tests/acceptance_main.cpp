// Prints one line per acceptance criterion and exits nonzero if any fails.
#include <cstdio>
#include <filesystem>

#include <spdlog/spdlog.h>

#include "support/acceptance_checks.hpp"
#include "support/git_fixture.hpp"

int main(int argc, char** argv) {
  spdlog::set_level(spdlog::level::err);
  const std::filesystem::path fixtures = argc > 1 ? argv[1] : REFPRED_FIXTURE_DIR "/java";
  const auto workdir = refpred::testing::scratch_dir("acceptance");
  int failures = 0;
  for (const auto& check : refpred::testing::acceptance_checks(fixtures)) {
    const auto r = check.run(workdir);
    std::printf("[%s] criterion %d: %s (%s, %.2fs)\n", r.pass ? "PASS" : "FAIL", check.number, check.title.c_str(),
                r.detail.c_str(), r.seconds);
    std::fflush(stdout);
    failures += r.pass ? 0 : 1;
  }
  std::error_code ec;
  if (failures == 0) std::filesystem::remove_all(workdir, ec);
  return failures == 0 ? 0 : 1;
}
