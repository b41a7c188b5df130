#include "refpred/ml/dataset.hpp"

#include "refpred/error.hpp"

namespace refpred::ml {

Dataset make_dataset(const std::vector<std::vector<double>>& rows, const Labels& labels) {
  Dataset d;
  const auto cols = rows.empty() ? 0 : rows.front().size();
  d.X.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw Error("ragged feature rows");
    for (std::size_t j = 0; j < cols; ++j) d.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  d.y = labels;
  check_labels(d.X, d.y);
  return d;
}

void check_labels(const Matrix& X, const Labels& y) {
  if (static_cast<std::size_t>(X.rows()) != y.size()) {
    throw NonBinaryLabels("label count " + std::to_string(y.size()) + " does not match " +
                          std::to_string(X.rows()) + " rows");
  }
  for (int v : y) {
    if (v != 0 && v != 1) throw NonBinaryLabels("label value " + std::to_string(v) + " is not 0 or 1");
  }
}

void check_both_classes(const Labels& y) {
  const auto pos = count_positive(y);
  if (pos == 0 || pos == y.size()) throw SingleClass("both classes must be present");
}

std::size_t count_positive(const Labels& y) {
  std::size_t n = 0;
  for (int v : y) n += v == 1;
  return n;
}

Matrix select_rows(const Matrix& X, std::span<const std::size_t> rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), X.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(rows[i]));
  return out;
}

Labels select(const Labels& y, std::span<const std::size_t> rows) {
  Labels out;
  out.reserve(rows.size());
  for (auto r : rows) out.push_back(y[r]);
  return out;
}

Dataset subset(const Dataset& d, std::span<const std::size_t> rows) { return {select_rows(d.X, rows), select(d.y, rows)}; }

}  // namespace refpred::ml
