#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace refpred::testing {

// Compares the extractor output for `java` with the hand-written oracle file
// and returns one message per disagreement. Oracle sections:
//   [class <qualified name>]
//   [method <qualified name> <signature>]
//   [variable <qualified name> <signature> <label>]
// followed by `feature = value` lines; unlisted features are zero. Every
// class, method and variable the extractor reports must have a section.
std::vector<std::string> check_metric_oracle(const std::filesystem::path& java, const std::filesystem::path& oracle);

// Sorted *.java files that have a sibling .oracle file.
std::vector<std::filesystem::path> oracle_fixtures(const std::filesystem::path& dir);

}  // namespace refpred::testing
