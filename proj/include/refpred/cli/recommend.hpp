#pragma once

#include <cstddef>
#include <filesystem>
#include <ostream>
#include <vector>

#include "refpred/domain.hpp"
#include "refpred/ml/model.hpp"

namespace refpred::cli {

struct RecommendationItem {
  ElementKey key;
  RefactoringType refactoring = RefactoringType::ExtractClass;
  double probability = 0.0;
};

struct LoadedModel {
  std::filesystem::path file;
  ml::TrainedModel model;
  RefactoringType refactoring;
  const FeatureCatalog* catalog = nullptr;
};

// Every *.model.json under `dir`, by file name. Throws IOFailure when the
// directory is missing, CatalogMismatch when a model's catalog is unknown or
// belongs to another level than its refactoring.
std::vector<LoadedModel> load_models(const std::filesystem::path& dir);

struct RecommendOptions {
  std::size_t top_n = 10;
};

struct RecommendResult {
  std::vector<RecommendationItem> items;
  std::size_t files = 0;
  std::size_t skipped_files = 0;  // unparsable
  bool history_available = false;
};

// Scores every class, method and variable of the production .java files in
// `snapshot` with the models of its level. Models of one refactoring are
// averaged. Process and ownership columns come from the git history when
// `snapshot` is a work tree and are zero otherwise. Items are ordered by
// descending probability, then key, then refactoring.
RecommendResult recommend(const std::vector<LoadedModel>& models, const std::filesystem::path& snapshot,
                          const RecommendOptions& options = {});

// Tab-separated: probability, refactoring, level, file, class, method, variable.
void print_recommendations(std::ostream& out, const std::vector<RecommendationItem>& items);

}  // namespace refpred::cli
