#pragma once

#include <cstdint>
#include <vector>

#include "refpred/ml/dataset.hpp"

namespace refpred::pipeline {

// k disjoint folds covering every row. The members of each class are shuffled
// and dealt round-robin; class 1 starts at the fold after the one that
// received the last class-0 row, so fold sizes differ by at most one. Each
// fold lists its rows in ascending order. Throws ClassTooSmall when a class
// has fewer than k members, std::invalid_argument when k < 2.
std::vector<std::vector<std::size_t>> stratified_folds(const ml::Labels& y, int k, std::uint64_t seed);

// Rows not in folds[f], ascending.
std::vector<std::size_t> training_rows(const std::vector<std::vector<std::size_t>>& folds, std::size_t f);

}  // namespace refpred::pipeline
