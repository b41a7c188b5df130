#include "refpred/pipeline/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <spdlog/spdlog.h>

#include "refpred/error.hpp"
#include "refpred/ml/sampling.hpp"
#include "refpred/pipeline/folds.hpp"
#include "refpred/rng.hpp"

namespace refpred::pipeline {

namespace {

std::vector<std::size_t> balance(const ml::Dataset& d, Sampler s, std::uint64_t seed) {
  return s == Sampler::NearMiss ? ml::near_miss_indices(d.X, d.y) : ml::random_undersample_indices(d.y, seed);
}

EvaluationReport base_report(std::string protocol, ml::Algorithm a, RefactoringType r, const std::string& dataset,
                             const std::string& catalog, std::uint64_t seed) {
  EvaluationReport rep;
  rep.protocol = std::move(protocol);
  rep.algorithm = std::string(ml::algorithm_id(a));
  rep.refactoring = std::string(to_string(r));
  rep.dataset = dataset;
  rep.catalog_hash = catalog;
  rep.seed = seed;
  return rep;
}

}  // namespace

SearchConfig search_config_for(ml::Algorithm a, const TrainConfig& config) {
  auto s = default_search_config(a);
  if (config.iterations) s.iterations = *config.iterations;
  if (config.folds) s.folds = *config.folds;
  s.seed = derive_seed(config.seed, "search");
  s.space = config.space;
  s.fold_internal_scaling = !config.global_scaling;
  return s;
}

TrainOutcome train_and_evaluate(const dataset::TrainingTable& table, ml::Algorithm a, const TrainConfig& config) {
  const auto full = ml::make_dataset(table.features, table.labels);
  const auto kept = balance(full, config.sampler, derive_seed(config.seed, "undersample"));
  const auto raw = ml::subset(full, kept);

  ml::Dataset work = raw;
  std::optional<ml::MinMaxScaler> global;
  if (config.global_scaling) {
    global = ml::MinMaxScaler::fit(raw.X);
    work.X = global->transform(raw.X);
  }

  const auto search = search_config_for(a, config);
  auto found = random_search(work, a, search);

  const auto folds = stratified_folds(work.y, search.folds, derive_seed(config.seed, "eval-folds"));
  auto report = base_report("cv", a, table.refactoring, config.dataset_name, table.catalog_hash, config.seed);
  report.rows_before_balancing = static_cast<std::int64_t>(table.size());
  report.positives = static_cast<std::int64_t>(ml::count_positive(raw.y));
  report.negatives = static_cast<std::int64_t>(raw.rows()) - report.positives;
  report.best_hyperparameters = ml::to_json(found.best);
  report.folds = cross_validate(work, found.best, folds, derive_seed(config.seed, "eval-fit"),
                                search.fold_internal_scaling);
  report.compute_means();
  report.search_log = std::move(found.log);

  auto model = ml::TrainedModel::train(found.best, raw.X, raw.y, derive_seed(config.seed, "final"),
                                       table.catalog_hash, table.refactoring, global ? &*global : nullptr);
  return {std::move(model), std::move(report)};
}

TrainOutcome train_and_evaluate(const std::filesystem::path& dataset_dir, RefactoringType r, ml::Algorithm a,
                                const TrainConfig& config) {
  auto cfg = config;
  if (cfg.dataset_name.empty()) cfg.dataset_name = dataset_dir.filename().string();
  return train_and_evaluate(dataset::build_training_table(dataset_dir, r), a, cfg);
}

EvaluationReport cross_dataset_evaluate(const ml::TrainedModel& model, const dataset::TrainingTable& other,
                                        std::uint64_t seed, const std::string& dataset_name) {
  if (model.catalog_hash() != other.catalog_hash) {
    throw CatalogMismatch("model catalog " + model.catalog_hash() + " does not match dataset catalog " +
                          other.catalog_hash);
  }
  const auto full = ml::make_dataset(other.features, other.labels);
  const auto d = ml::subset(full, ml::random_undersample_indices(full.y, derive_seed(seed, "undersample")));
  auto report = base_report("cross-dataset", model.algorithm(), other.refactoring, dataset_name, other.catalog_hash,
                            seed);
  report.rows_before_balancing = static_cast<std::int64_t>(other.size());
  report.positives = static_cast<std::int64_t>(ml::count_positive(d.y));
  report.negatives = static_cast<std::int64_t>(d.rows()) - report.positives;
  report.best_hyperparameters = ml::to_json(model.hyperparameters());
  report.folds.push_back(fold_result(confusion(d.y, model.predict(d.X))));
  report.compute_means();
  return report;
}

EvaluationReport cross_dataset_evaluate(const std::filesystem::path& model_file,
                                        const std::filesystem::path& other_dir, std::uint64_t seed) {
  const auto model = ml::TrainedModel::load(model_file);
  if (!model.refactoring()) throw Error("model " + model_file.string() + " does not name its refactoring");
  const auto table = dataset::build_training_table(other_dir, *model.refactoring());
  return cross_dataset_evaluate(model, table, seed, other_dir.filename().string());
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> ordered_split(
    const std::vector<std::int64_t>& timestamps, double fraction, bool* all_equal) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw std::invalid_argument("fraction must lie in (0, 1)");
  std::vector<std::size_t> order(timestamps.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return timestamps[a] < timestamps[b]; });
  const auto n = order.size();
  const auto n_train = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
  if (n_train == 0 || n_train >= n) {
    throw DegenerateSplit("a " + std::to_string(fraction) + " split of " + std::to_string(n) +
                          " rows leaves one side empty");
  }
  if (all_equal) {
    *all_equal = std::adjacent_find(timestamps.begin(), timestamps.end(), std::not_equal_to<>()) == timestamps.end();
  }
  return {std::vector<std::size_t>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train)),
          std::vector<std::size_t>(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end())};
}

EvaluationReport ordered_split_evaluate(const dataset::TrainingTable& table, ml::Algorithm a, double fraction,
                                        const TrainConfig& config) {
  bool all_equal = false;
  const auto [train_rows, test_rows] = ordered_split(table.timestamps, fraction, &all_equal);
  if (all_equal) spdlog::warn("all rows share one timestamp; the split follows stored row order");

  const auto full = ml::make_dataset(table.features, table.labels);
  const auto train = ml::subset(full, train_rows);
  const auto test = ml::subset(full, test_rows);
  const auto pos = ml::count_positive(train.y);
  if (pos == 0 || pos == train.rows()) throw DegenerateSplit("the earlier part holds a single class");

  const auto raw = ml::subset(train, balance(train, config.sampler, derive_seed(config.seed, "undersample")));
  ml::Dataset work = raw;
  std::optional<ml::MinMaxScaler> global;
  if (config.global_scaling) {
    global = ml::MinMaxScaler::fit(raw.X);
    work.X = global->transform(raw.X);
  }
  const auto search = search_config_for(a, config);
  auto found = random_search(work, a, search);
  const auto model = ml::TrainedModel::train(found.best, raw.X, raw.y, derive_seed(config.seed, "final"),
                                             table.catalog_hash, table.refactoring, global ? &*global : nullptr);

  auto report = base_report("ordered-split", a, table.refactoring, config.dataset_name, table.catalog_hash,
                            config.seed);
  report.rows_before_balancing = static_cast<std::int64_t>(train.rows());
  report.positives = static_cast<std::int64_t>(ml::count_positive(raw.y));
  report.negatives = static_cast<std::int64_t>(raw.rows()) - report.positives;
  report.best_hyperparameters = ml::to_json(found.best);
  report.folds.push_back(fold_result(confusion(test.y, model.predict(test.X))));
  report.compute_means();
  report.search_log = std::move(found.log);
  return report;
}

}  // namespace refpred::pipeline
