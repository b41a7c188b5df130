#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace refpred::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitMissingInput = 2;
inline constexpr int kExitCatalogMismatch = 3;

// File names inside a model directory.
std::string model_file_name(std::string_view refactoring_slug, std::string_view algorithm_id);
std::string report_file_name(std::string_view refactoring_slug, std::string_view algorithm_id);

// Parses `args` (without the program name) and runs the chosen subcommand.
// Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace refpred::cli
