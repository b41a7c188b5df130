#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "refpred/dataset/store.hpp"
#include "refpred/ml/model.hpp"
#include "refpred/pipeline/report.hpp"
#include "refpred/pipeline/search.hpp"

namespace refpred::pipeline {

enum class Sampler { Random, NearMiss };

struct TrainConfig {
  std::uint64_t seed = 0;
  std::optional<int> iterations;  // per-algorithm default when empty
  std::optional<int> folds;
  // Scale the whole balanced table before the search instead of inside each
  // training fold.
  bool global_scaling = false;
  Sampler sampler = Sampler::Random;
  ml::SearchSpace space;
  std::string dataset_name;
};

SearchConfig search_config_for(ml::Algorithm a, const TrainConfig& config);

struct TrainOutcome {
  ml::TrainedModel model;
  EvaluationReport report;
};

// Balances the table by under-sampling, runs the random search, evaluates the
// best point by stratified cross-validation and fits the final model on the
// whole balanced table. Throws SingleClass, ClassTooSmall.
TrainOutcome train_and_evaluate(const dataset::TrainingTable& table, ml::Algorithm a, const TrainConfig& config);
// Throws EmptyClass when the dataset lacks either side.
TrainOutcome train_and_evaluate(const std::filesystem::path& dataset_dir, RefactoringType r, ml::Algorithm a,
                                const TrainConfig& config);

// Under-samples `other` the same way, applies the model (and its stored
// scaler) to every remaining row. Throws CatalogMismatch.
EvaluationReport cross_dataset_evaluate(const ml::TrainedModel& model, const dataset::TrainingTable& other,
                                        std::uint64_t seed, const std::string& dataset_name = {});
EvaluationReport cross_dataset_evaluate(const std::filesystem::path& model_file,
                                        const std::filesystem::path& other_dir, std::uint64_t seed);

// Row order by timestamp (stable) split into the first floor(fraction * n)
// rows and the rest. Sets `all_equal` when every timestamp is the same.
// Throws DegenerateSplit when either side would be empty.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> ordered_split(
    const std::vector<std::int64_t>& timestamps, double fraction, bool* all_equal = nullptr);

// Trains (search included) on the balanced earlier part and tests on the
// later part. Throws DegenerateSplit.
EvaluationReport ordered_split_evaluate(const dataset::TrainingTable& table, ml::Algorithm a, double fraction,
                                        const TrainConfig& config);

}  // namespace refpred::pipeline
