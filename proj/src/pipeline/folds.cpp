#include "refpred/pipeline/folds.hpp"

#include <algorithm>
#include <stdexcept>

#include "refpred/error.hpp"
#include "refpred/rng.hpp"

namespace refpred::pipeline {

std::vector<std::vector<std::size_t>> stratified_folds(const ml::Labels& y, int k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("at least two folds are needed");
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < y.size(); ++i) by_class[y[i] == 1 ? 1 : 0].push_back(i);
  for (int c = 0; c < 2; ++c) {
    if (by_class[c].size() < static_cast<std::size_t>(k)) {
      throw ClassTooSmall("class " + std::to_string(c) + " has " + std::to_string(by_class[c].size()) +
                          " rows, fewer than " + std::to_string(k) + " folds");
    }
  }

  Rng rng(seed);
  std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
  std::size_t next = 0;
  for (auto& members : by_class) {
    rng.shuffle(std::span<std::size_t>(members));
    for (auto row : members) {
      folds[next].push_back(row);
      next = (next + 1) % folds.size();
    }
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

std::vector<std::size_t> training_rows(const std::vector<std::vector<std::size_t>>& folds, std::size_t f) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < folds.size(); ++i) {
    if (i != f) out.insert(out.end(), folds[i].begin(), folds[i].end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace refpred::pipeline
