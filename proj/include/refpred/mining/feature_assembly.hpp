#pragma once

#include <span>
#include <string>
#include <vector>

#include "refpred/domain.hpp"
#include "refpred/history/process_metrics.hpp"
#include "refpred/metrics/code_metrics.hpp"
#include "refpred/mining/history_walker.hpp"
#include "refpred/mining/repository.hpp"

namespace refpred::mining {

struct AssemblyOptions {
  bool history_adjuncts = false;  // append process/ownership columns to method and variable rows
  bool derive_members = true;     // non-refactoring classes also yield method and variable rows
  double commit_timeout_seconds = kDefaultCommitTimeoutSeconds;
};

struct AssemblyStats {
  std::size_t discarded = 0;  // element not found, unparsable or missing snapshot
  std::size_t timed_out_commits = 0;
};

struct AssemblyResult {
  std::vector<LabeledInstance> instances;
  AssemblyStats stats;
};

// Process and ownership values in catalog order. A file with no prior
// history yields zeros.
std::vector<double> history_features(const FileHistory& history);

// Builds the catalog-ordered vectors for the three levels from already
// computed parts.
std::vector<double> class_feature_vector(const metrics::ClassMetrics& c, const std::vector<double>& history);
std::vector<double> method_feature_vector(const metrics::ClassMetrics& c, const metrics::MethodMetrics& m,
                                          const std::vector<double>* history);
std::vector<double> variable_feature_vector(const metrics::ClassMetrics& c, const metrics::MethodMetrics& m,
                                            const metrics::VariableMetrics& v, const std::vector<double>* history);

// "name" for the first declaration of a name, "name#n" for later ones.
std::string variable_label(const metrics::VariableDeclaration& v);
// Inverse of variable_label.
std::pair<std::string, std::size_t> split_variable_label(std::string_view label);

// Computes feature vectors for every event at its snapshot. Events whose
// element cannot be located are dropped and counted.
AssemblyResult assemble_instances(Repository& repo, std::span<const MiningEvent> events,
                                  const AssemblyOptions& options = {});

}  // namespace refpred::mining
