#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "refpred/ml/dataset.hpp"

namespace refpred::pipeline {

struct ConfusionMatrix {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;

  std::int64_t total() const noexcept { return tp + fp + tn + fn; }
  // 0 when nothing was predicted positive.
  double precision() const noexcept;
  // 0 when there are no positives.
  double recall() const noexcept;
  double accuracy() const noexcept;

  bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix confusion(const ml::Labels& truth, const ml::Labels& predicted);

struct FoldResult {
  ConfusionMatrix confusion;
  double precision = 0.0;
  double recall = 0.0;
  double accuracy = 0.0;
};

FoldResult fold_result(const ConfusionMatrix& cm);

struct SearchLogEntry {
  std::size_t index = 0;
  nlohmann::json hyperparameters;
  double mean_accuracy = 0.0;
  bool failed = false;
  std::string error;
};

struct EvaluationReport {
  std::string protocol;  // cv, cross-dataset, ordered-split
  std::string algorithm;
  std::string refactoring;
  std::string dataset;
  std::string catalog_hash;
  std::uint64_t seed = 0;
  std::int64_t rows_before_balancing = 0;
  std::int64_t positives = 0;  // after balancing
  std::int64_t negatives = 0;
  nlohmann::json best_hyperparameters;
  std::vector<FoldResult> folds;
  double mean_precision = 0.0;
  double mean_recall = 0.0;
  double mean_accuracy = 0.0;
  std::vector<SearchLogEntry> search_log;

  // Arithmetic means over folds.
  void compute_means();

  nlohmann::ordered_json to_json() const;
  static EvaluationReport from_json(const nlohmann::json& j);
  // Stable text form (2-space indented JSON with a trailing newline).
  std::string dump() const;
};

}  // namespace refpred::pipeline
