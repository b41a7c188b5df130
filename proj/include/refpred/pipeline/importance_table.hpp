#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "refpred/domain.hpp"

namespace refpred::pipeline {

// Feature indices by descending importance. Equal values keep the lower index
// first.
std::vector<std::size_t> rank_features(std::span<const double> importance);

struct ImportanceInput {
  std::string model;  // free-form label, e.g. "extract_method__rf"
  ElementLevel level = ElementLevel::Class;
  std::vector<std::string> feature_names;
  std::vector<double> importance;
};

struct ImportanceRow {
  std::string feature;
  std::int64_t top1 = 0;
  std::int64_t top5 = 0;
  std::int64_t top10 = 0;
};

struct ImportanceTable {
  ElementLevel level = ElementLevel::Class;
  std::int64_t models = 0;
  std::vector<ImportanceRow> rows;  // catalog order
  // Features that never reach any model's top 10, in catalog order.
  std::vector<std::string> never_in_top10() const;
  // Rows by descending top1, then top5, then top10; catalog order breaks ties.
  std::vector<ImportanceRow> sorted_rows() const;
};

// One table per level present in `models`, in class, method, variable order.
// Throws CatalogMismatch when two models of one level list different
// features, or an importance vector has the wrong length.
std::vector<ImportanceTable> build_importance_tables(std::span<const ImportanceInput> models);

// Columns: feature, top1, top5, top10. Sorted as sorted_rows().
void write_importance_csv(std::ostream& out, const ImportanceTable& table);

}  // namespace refpred::pipeline
