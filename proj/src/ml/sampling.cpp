#include "refpred/ml/sampling.hpp"

#include <algorithm>
#include <numeric>

#include "refpred/rng.hpp"

namespace refpred::ml {

namespace {

struct Split {
  std::vector<std::size_t> minority;
  std::vector<std::size_t> majority;
};

Split split_by_class(const Labels& y) {
  check_both_classes(y);
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < y.size(); ++i) (y[i] == 1 ? pos : neg).push_back(i);
  // equal sizes: nothing to cut, either side works
  if (pos.size() <= neg.size()) return {pos, neg};
  return {neg, pos};
}

std::vector<std::size_t> merge_sorted(std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  return a;
}

}  // namespace

std::vector<std::size_t> random_undersample_indices(const Labels& y, std::uint64_t seed) {
  auto [minority, majority] = split_by_class(y);
  if (minority.size() == majority.size()) return merge_sorted(minority, majority);
  Rng rng(seed);
  // partial Fisher-Yates: the first |minority| slots become a uniform subset
  for (std::size_t i = 0; i < minority.size(); ++i) {
    const auto j = i + rng.index(majority.size() - i);
    std::swap(majority[i], majority[j]);
  }
  majority.resize(minority.size());
  return merge_sorted(minority, majority);
}

std::vector<std::size_t> near_miss_indices(const Matrix& X, const Labels& y, int neighbours) {
  auto [minority, majority] = split_by_class(y);
  if (minority.size() == majority.size()) return merge_sorted(minority, majority);
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(std::max(neighbours, 1)), minority.size());

  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(majority.size());
  std::vector<double> dist(minority.size());
  for (auto r : majority) {
    for (std::size_t m = 0; m < minority.size(); ++m) {
      dist[m] = (X.row(static_cast<Eigen::Index>(r)) - X.row(static_cast<Eigen::Index>(minority[m]))).norm();
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    const double mean = std::accumulate(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), 0.0) /
                        static_cast<double>(k);
    scored.emplace_back(mean, r);
  }
  std::sort(scored.begin(), scored.end());
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < minority.size(); ++i) kept.push_back(scored[i].second);
  return merge_sorted(minority, kept);
}

Dataset random_undersample(const Dataset& d, std::uint64_t seed) {
  return subset(d, random_undersample_indices(d.y, seed));
}

Dataset near_miss_undersample(const Dataset& d, int neighbours) {
  return subset(d, near_miss_indices(d.X, d.y, neighbours));
}

}  // namespace refpred::ml
