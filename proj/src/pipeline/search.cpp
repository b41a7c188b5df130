#include "refpred/pipeline/search.hpp"

#include <map>
#include <stdexcept>

#include <spdlog/spdlog.h>

#include "refpred/error.hpp"
#include "refpred/ml/model.hpp"
#include "refpred/pipeline/folds.hpp"
#include "refpred/rng.hpp"

namespace refpred::pipeline {

SearchConfig default_search_config(ml::Algorithm a) {
  SearchConfig c;
  if (a == ml::Algorithm::LinearSvm || a == ml::Algorithm::NeuralNetwork) {
    c.iterations = 10;
    c.folds = 5;
  }
  return c;
}

std::vector<FoldResult> cross_validate(const ml::Dataset& d, const ml::Hyperparameters& hp,
                                       const std::vector<std::vector<std::size_t>>& folds, std::uint64_t seed,
                                       bool fold_internal_scaling) {
  std::vector<FoldResult> out;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const auto train_rows = training_rows(folds, f);
    ml::Matrix train_x = ml::select_rows(d.X, train_rows);
    ml::Matrix test_x = ml::select_rows(d.X, folds[f]);
    if (fold_internal_scaling) {
      const auto scaler = ml::MinMaxScaler::fit(train_x);
      train_x = scaler.transform(train_x);
      test_x = scaler.transform(test_x);
    }
    const auto model = ml::fit_estimator(hp, train_x, ml::select(d.y, train_rows), derive_seed(seed, f));
    out.push_back(fold_result(confusion(ml::select(d.y, folds[f]), ml::predict(model, test_x))));
  }
  return out;
}

SearchResult evaluate_candidates(const ml::Dataset& d, std::span<const ml::Hyperparameters> candidates,
                                 const SearchConfig& config) {
  if (candidates.empty()) throw std::invalid_argument("no candidates to evaluate");
  if (config.folds < 2) throw std::invalid_argument("at least two folds are needed");
  const auto folds = stratified_folds(d.y, config.folds, derive_seed(config.seed, "search-folds"));
  const auto fit_seed = derive_seed(config.seed, "search-fit");

  SearchResult result;
  bool found = false;
  std::map<std::string, SearchLogEntry> seen;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    SearchLogEntry entry;
    entry.index = i;
    entry.hyperparameters = ml::to_json(candidates[i]);
    const auto key = entry.hyperparameters.dump();
    if (const auto it = seen.find(key); it != seen.end()) {
      entry.mean_accuracy = it->second.mean_accuracy;
      entry.failed = it->second.failed;
      entry.error = it->second.error;
    } else {
      try {
        const auto folds_out = cross_validate(d, candidates[i], folds, fit_seed, config.fold_internal_scaling);
        double sum = 0.0;
        for (const auto& f : folds_out) sum += f.accuracy;
        entry.mean_accuracy = sum / static_cast<double>(folds_out.size());
      } catch (const Error& e) {
        entry.failed = true;
        entry.error = e.what();
        spdlog::warn("search candidate {} failed: {}", i, e.what());
      }
      seen.emplace(key, entry);
    }
    if (!entry.failed && (!found || entry.mean_accuracy > result.best_score)) {
      found = true;
      result.best = candidates[i];
      result.best_score = entry.mean_accuracy;
      result.best_index = i;
    }
    result.log.push_back(std::move(entry));
  }
  if (!found) throw Error("every search candidate failed");
  return result;
}

SearchResult random_search(const ml::Dataset& d, ml::Algorithm a, const SearchConfig& config) {
  if (config.iterations < 1) throw std::invalid_argument("at least one search iteration is needed");
  Rng rng(derive_seed(config.seed, "search-space"));
  std::vector<ml::Hyperparameters> candidates;
  for (int i = 0; i < config.iterations; ++i) candidates.push_back(ml::sample_hyperparameters(a, rng, config.space));
  return evaluate_candidates(d, candidates, config);
}

}  // namespace refpred::pipeline
