#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "refpred/ml/dataset.hpp"
#include "refpred/ml/hyperparameters.hpp"
#include "refpred/pipeline/report.hpp"

namespace refpred::pipeline {

struct SearchConfig {
  int iterations = 100;
  int folds = 10;
  std::uint64_t seed = 0;
  ml::SearchSpace space;
  // Fit the scaler on each training fold. When false the rows are used as
  // given (the caller scaled the whole table up front).
  bool fold_internal_scaling = true;
};

// 100 iterations over 10 folds; 10 over 5 for the SVM and the network.
SearchConfig default_search_config(ml::Algorithm a);

// Fits on all folds but one and scores the held-out fold, for every fold.
// Fold f trains with seed derive_seed(seed, f).
std::vector<FoldResult> cross_validate(const ml::Dataset& d, const ml::Hyperparameters& hp,
                                       const std::vector<std::vector<std::size_t>>& folds, std::uint64_t seed,
                                       bool fold_internal_scaling);

struct SearchResult {
  ml::Hyperparameters best;
  double best_score = 0.0;
  std::size_t best_index = 0;
  std::vector<SearchLogEntry> log;
};

// Scores each candidate by mean cross-validated accuracy on one shared fold
// assignment and keeps the first best. Candidates that throw are logged as
// failures. Identical candidates are scored once. Throws Error when every
// candidate fails.
SearchResult evaluate_candidates(const ml::Dataset& d, std::span<const ml::Hyperparameters> candidates,
                                 const SearchConfig& config);

// Draws config.iterations points from the algorithm's space and evaluates
// them with evaluate_candidates.
SearchResult random_search(const ml::Dataset& d, ml::Algorithm a, const SearchConfig& config);

}  // namespace refpred::pipeline
