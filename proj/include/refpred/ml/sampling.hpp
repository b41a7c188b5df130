#pragma once

#include <cstdint>
#include <vector>

#include "refpred/ml/dataset.hpp"

namespace refpred::ml {

// Both samplers return the kept row indices in ascending order; the minority
// class is kept whole and the majority class is cut down to the same size.
// Balanced input is returned unchanged. Throw SingleClass.

// Uniform random subset of the majority class.
std::vector<std::size_t> random_undersample_indices(const Labels& y, std::uint64_t seed);

// NearMiss-1: keeps the majority rows with the smallest mean Euclidean
// distance to their `neighbours` nearest minority rows. Ties go to the lower
// row index.
std::vector<std::size_t> near_miss_indices(const Matrix& X, const Labels& y, int neighbours = 3);

Dataset random_undersample(const Dataset& d, std::uint64_t seed);
Dataset near_miss_undersample(const Dataset& d, int neighbours = 3);

}  // namespace refpred::ml
