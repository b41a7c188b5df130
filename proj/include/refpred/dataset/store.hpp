#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "refpred/domain.hpp"

namespace refpred::dataset {

// Layout of a dataset directory:
//   manifest.json
//   <level>/<refactoring slug>.csv   positive rows of one refactoring
//   <level>/none.csv                 non-refactoring rows of the level
// Columns: catalog features, label (1/0), timestamp, project, commit, file,
// class, method, variable.

inline constexpr std::string_view kNoneLabel = "none";
inline constexpr int kManifestVersion = 1;

struct DatasetManifest {
  int version = kManifestVersion;
  std::string source;  // apache, fdroid, github, custom, ...
  int k = 0;
  bool history_adjuncts = false;
  std::map<std::string, std::string> catalog_hashes;                  // level -> hash
  std::map<std::string, std::map<std::string, std::int64_t>> counts;  // level -> label class -> rows
  std::string created;                                                // UTC, ISO 8601

  std::int64_t count(ElementLevel level, std::optional<RefactoringType> label) const;
  std::string to_json() const;
  static DatasetManifest from_json(std::string_view text);
};

struct StoreOptions {
  std::string source = "custom";
  int k = 50;
  bool history_adjuncts = false;
};

std::string label_class(std::optional<RefactoringType> r);
std::filesystem::path table_path(const std::filesystem::path& dir, ElementLevel level,
                                 std::optional<RefactoringType> label);
std::vector<std::string> csv_header(const FeatureCatalog& catalog);

// Appends rows and updates the manifest counts under an exclusive lock on the
// directory. Rows are first written to a private shard file and merged only
// once complete, so readers never see a partial batch. Creates the directory
// and manifest on first use. Throws CatalogMismatch when a vector has the
// wrong length or the directory was created with another catalog, IOFailure
// on file errors. Returns the number of rows written.
std::size_t append_instances(const std::filesystem::path& dir, std::span<const LabeledInstance> instances,
                             const StoreOptions& options = {});

// Throws IOFailure when missing or unreadable.
DatasetManifest read_manifest(const std::filesystem::path& dir);

// Rows of one label class in stored order. Throws CatalogMismatch when the
// header does not match the catalog recorded in the manifest.
std::vector<LabeledInstance> load_instances(const std::filesystem::path& dir, ElementLevel level,
                                            std::optional<RefactoringType> label);

struct TrainingTable {
  RefactoringType refactoring = RefactoringType::ExtractClass;
  ElementLevel level = ElementLevel::Class;
  std::string catalog_hash;
  std::vector<std::string> feature_names;
  std::vector<std::vector<double>> features;
  std::vector<int> labels;  // 1 = refactored
  std::vector<std::int64_t> timestamps;
  std::vector<ElementKey> keys;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t positives() const;
  std::size_t negatives() const { return size() - positives(); }
};

// All rows of `refactoring` as positives followed by every non-refactoring row
// of the same level. Throws EmptyClass naming the empty side.
TrainingTable build_training_table(const std::filesystem::path& dir, RefactoringType refactoring);

// Writes a merged table as CSV (same column layout as the store).
void write_training_table(const TrainingTable& table, const std::filesystem::path& file);

}  // namespace refpred::dataset
