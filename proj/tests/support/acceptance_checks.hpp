#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace refpred::testing {

struct CheckOutcome {
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceCheck {
  int number;
  std::string title;
  std::function<CheckOutcome(const std::filesystem::path& workdir)> run;
};

// The nine acceptance criteria in order. `fixtures` is the directory holding
// the Java oracle files.
std::vector<AcceptanceCheck> acceptance_checks(const std::filesystem::path& java_fixtures);

}  // namespace refpred::testing
