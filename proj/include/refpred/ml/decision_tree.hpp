#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "refpred/ml/dataset.hpp"
#include "refpred/ml/hyperparameters.hpp"

namespace refpred::ml {

// Node impurity of a set with `positives` class-1 members out of `total`.
double impurity(Criterion c, double positives, double total);

struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0.0;  // x[feature] <= threshold goes left
  int left = -1;
  int right = -1;
  double value = 0.0;  // fraction of class 1 among the node's samples
  std::int64_t samples = 0;
  double impurity = 0.0;

  bool leaf() const noexcept { return feature < 0; }
};

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double child_impurity = 0.0;  // n_left * imp_left + n_right * imp_right
};

// CART for binary labels. With splitter=best every midpoint between distinct
// consecutive values of every candidate feature is scored; equal scores
// (within 1e-12) keep the lowest feature index, then the lowest threshold.
// splitter=random draws one threshold per feature uniformly in the node's
// value range. When max_features is below the feature count, the candidate
// features of each node are a uniform subset.
class DecisionTree {
 public:
  // `rows` lists the training rows, repetitions allowed (bootstrap); all rows
  // when empty.
  static DecisionTree fit(const Matrix& X, const Labels& y, const TreeParams& p, std::uint64_t seed,
                          std::span<const std::size_t> rows = {});

  // Best split of the given rows over the given features, or feature = -1.
  static SplitChoice best_split(const Matrix& X, const Labels& y, std::span<const std::size_t> rows,
                                std::span<const int> features, Criterion criterion);

  Vector predict_proba(const Matrix& X) const;
  Labels predict(const Matrix& X) const;

  // Impurity decrease per feature, normalised to sum 1 (all zero for a stump).
  Vector feature_importance() const;

  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  std::size_t features() const noexcept { return n_features_; }
  int depth() const;

  nlohmann::json to_json() const;
  static DecisionTree from_json(const nlohmann::json& j);

 private:
  const TreeNode& leaf_for(const Matrix& X, Eigen::Index row) const;

  std::vector<TreeNode> nodes_;
  std::size_t n_features_ = 0;
};

// Tree i is grown with seed `seed` when i = 0 and derive_seed(seed, i)
// otherwise; bootstrap samples come from a separate stream. The probability
// of class 1 is the fraction of trees voting for it.
class RandomForest {
 public:
  static RandomForest fit(const Matrix& X, const Labels& y, const RandomForestParams& p, std::uint64_t seed);

  Vector predict_proba(const Matrix& X) const;
  // Mean of the per-tree normalised importances, renormalised.
  Vector feature_importance() const;

  const std::vector<DecisionTree>& trees() const noexcept { return trees_; }

  nlohmann::json to_json() const;
  static RandomForest from_json(const nlohmann::json& j);

 private:
  std::vector<DecisionTree> trees_;
};

std::uint64_t forest_tree_seed(std::uint64_t seed, std::size_t tree);

}  // namespace refpred::ml
