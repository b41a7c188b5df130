#include "refpred/pipeline/importance_table.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "refpred/dataset/csv.hpp"
#include "refpred/error.hpp"

namespace refpred::pipeline {

std::vector<std::size_t> rank_features(std::span<const double> importance) {
  std::vector<std::size_t> order(importance.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return importance[a] > importance[b]; });
  return order;
}

std::vector<std::string> ImportanceTable::never_in_top10() const {
  std::vector<std::string> out;
  for (const auto& r : rows) {
    if (r.top10 == 0) out.push_back(r.feature);
  }
  return out;
}

std::vector<ImportanceRow> ImportanceTable::sorted_rows() const {
  auto out = rows;
  std::stable_sort(out.begin(), out.end(), [](const ImportanceRow& a, const ImportanceRow& b) {
    if (a.top1 != b.top1) return a.top1 > b.top1;
    if (a.top5 != b.top5) return a.top5 > b.top5;
    return a.top10 > b.top10;
  });
  return out;
}

std::vector<ImportanceTable> build_importance_tables(std::span<const ImportanceInput> models) {
  std::map<ElementLevel, ImportanceTable> tables;
  std::map<ElementLevel, std::vector<std::string>> names;
  for (const auto& m : models) {
    if (m.importance.size() != m.feature_names.size()) {
      throw CatalogMismatch("model " + m.model + " has " + std::to_string(m.importance.size()) +
                            " importances for " + std::to_string(m.feature_names.size()) + " features");
    }
    auto [it, fresh] = names.emplace(m.level, m.feature_names);
    if (!fresh && it->second != m.feature_names) {
      throw CatalogMismatch("model " + m.model + " lists other features than earlier " +
                            std::string(to_string(m.level)) + " models");
    }
    auto& t = tables[m.level];
    if (fresh) {
      t.level = m.level;
      for (const auto& n : m.feature_names) t.rows.push_back({n});
    }
    ++t.models;
    const auto order = rank_features(m.importance);
    for (std::size_t r = 0; r < order.size() && r < 10; ++r) {
      auto& row = t.rows[order[r]];
      if (r < 1) ++row.top1;
      if (r < 5) ++row.top5;
      ++row.top10;
    }
  }
  std::vector<ImportanceTable> out;
  for (const auto level : kAllLevels) {
    if (auto it = tables.find(level); it != tables.end()) out.push_back(std::move(it->second));
  }
  return out;
}

void write_importance_csv(std::ostream& out, const ImportanceTable& table) {
  dataset::write_csv_row(out, {"feature", "top1", "top5", "top10"});
  for (const auto& r : table.sorted_rows()) {
    dataset::write_csv_row(out, {r.feature, std::to_string(r.top1), std::to_string(r.top5), std::to_string(r.top10)});
  }
}

}  // namespace refpred::pipeline
