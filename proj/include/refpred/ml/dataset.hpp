#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace refpred::ml {

using Matrix = Eigen::MatrixXd;  // rows are instances
using Vector = Eigen::VectorXd;
using Labels = std::vector<int>;  // 0 or 1

struct Dataset {
  Matrix X;
  Labels y;

  std::size_t rows() const noexcept { return static_cast<std::size_t>(X.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(X.cols()); }
};

Dataset make_dataset(const std::vector<std::vector<double>>& rows, const Labels& labels);

// Throws NonBinaryLabels for values other than 0/1, and when sizes differ.
void check_labels(const Matrix& X, const Labels& y);
// Throws SingleClass unless both labels occur.
void check_both_classes(const Labels& y);

std::size_t count_positive(const Labels& y);

Dataset subset(const Dataset& d, std::span<const std::size_t> rows);
Matrix select_rows(const Matrix& X, std::span<const std::size_t> rows);
Labels select(const Labels& y, std::span<const std::size_t> rows);

}  // namespace refpred::ml
