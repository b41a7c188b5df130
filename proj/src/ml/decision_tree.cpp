#include "refpred/ml/decision_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "refpred/error.hpp"
#include "refpred/rng.hpp"

namespace refpred::ml {

namespace {

constexpr double kTieTolerance = 1e-12;

struct Pending {
  int node;
  std::vector<std::size_t> rows;
  int depth;
};

double weighted_children(Criterion c, double lp, double ln, double tp, double tn) {
  return ln * impurity(c, lp, ln) + (tn - ln) * impurity(c, tp - lp, tn - ln);
}

}  // namespace

double impurity(Criterion c, double positives, double total) {
  if (total <= 0) return 0.0;
  const double p = positives / total;
  const double q = 1.0 - p;
  if (c == Criterion::Gini) return 1.0 - p * p - q * q;
  double h = 0.0;
  if (p > 0) h -= p * std::log2(p);
  if (q > 0) h -= q * std::log2(q);
  return h;
}

SplitChoice DecisionTree::best_split(const Matrix& X, const Labels& y, std::span<const std::size_t> rows,
                                     std::span<const int> features, Criterion criterion) {
  SplitChoice best;
  double best_score = HUGE_VAL;
  const double total = static_cast<double>(rows.size());
  double total_pos = 0;
  for (auto r : rows) total_pos += y[r];

  std::vector<std::pair<double, int>> column(rows.size());
  for (int f : features) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      column[i] = {X(static_cast<Eigen::Index>(rows[i]), f), y[rows[i]]};
    }
    std::sort(column.begin(), column.end());
    double left_pos = 0;
    for (std::size_t i = 0; i + 1 < column.size(); ++i) {
      left_pos += column[i].second;
      const double a = column[i].first, b = column[i + 1].first;
      if (!(a < b)) continue;
      double threshold = a + (b - a) / 2.0;
      if (threshold >= b) threshold = a;
      const double score = weighted_children(criterion, left_pos, static_cast<double>(i + 1), total_pos, total);
      if (score < best_score - kTieTolerance) {
        best_score = score;
        best = {f, threshold, score};
      }
    }
  }
  return best;
}

DecisionTree DecisionTree::fit(const Matrix& X, const Labels& y, const TreeParams& p, std::uint64_t seed,
                               std::span<const std::size_t> rows) {
  check_labels(X, y);
  if (X.rows() == 0) throw Error("cannot grow a tree on zero rows");
  DecisionTree tree;
  tree.n_features_ = static_cast<std::size_t>(X.cols());
  const auto d = static_cast<int>(X.cols());
  const auto k = static_cast<int>(resolve_max_features(p.max_features, tree.n_features_));
  Rng rng(seed);

  std::vector<std::size_t> all;
  if (rows.empty()) {
    all.resize(static_cast<std::size_t>(X.rows()));
    std::iota(all.begin(), all.end(), 0);
  } else {
    all.assign(rows.begin(), rows.end());
  }

  std::vector<int> pool(static_cast<std::size_t>(d));
  std::vector<Pending> stack;
  tree.nodes_.emplace_back();
  stack.push_back({0, std::move(all), 0});

  while (!stack.empty()) {
    Pending cur = std::move(stack.back());
    stack.pop_back();
    double pos = 0;
    for (auto r : cur.rows) pos += y[r];
    const double n = static_cast<double>(cur.rows.size());
    {
      auto& node = tree.nodes_[static_cast<std::size_t>(cur.node)];
      node.samples = static_cast<std::int64_t>(cur.rows.size());
      node.value = pos / n;
      node.impurity = impurity(p.criterion, pos, n);
    }
    const bool pure = pos == 0 || pos == n;
    const bool too_deep = p.max_depth && cur.depth >= *p.max_depth;
    if (pure || too_deep || static_cast<int>(cur.rows.size()) < p.min_samples_split || d == 0) continue;

    // candidate features, ascending
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<int> candidates;
    if (k >= d) {
      candidates = pool;
    } else {
      for (int i = 0; i < k; ++i) {
        const auto j = i + static_cast<int>(rng.index(static_cast<std::uint64_t>(d - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
      }
      candidates.assign(pool.begin(), pool.begin() + k);
      std::sort(candidates.begin(), candidates.end());
    }

    SplitChoice split;
    if (p.splitter == Splitter::Best) {
      split = best_split(X, y, cur.rows, candidates, p.criterion);
    } else {
      double best_score = HUGE_VAL;
      for (int f : candidates) {
        double lo = HUGE_VAL, hi = -HUGE_VAL;
        for (auto r : cur.rows) {
          const double v = X(static_cast<Eigen::Index>(r), f);
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
        if (!(lo < hi)) continue;
        const double threshold = rng.uniform(lo, hi);
        double lp = 0, ln = 0;
        for (auto r : cur.rows) {
          if (X(static_cast<Eigen::Index>(r), f) <= threshold) {
            ln += 1;
            lp += y[r];
          }
        }
        const double score = weighted_children(p.criterion, lp, ln, pos, n);
        if (score < best_score - kTieTolerance) {
          best_score = score;
          split = {f, threshold, score};
        }
      }
    }
    if (split.feature < 0) continue;

    std::vector<std::size_t> left, right;
    for (auto r : cur.rows) {
      (X(static_cast<Eigen::Index>(r), split.feature) <= split.threshold ? left : right).push_back(r);
    }
    if (left.empty() || right.empty()) continue;

    const int li = static_cast<int>(tree.nodes_.size());
    tree.nodes_.emplace_back();
    tree.nodes_.emplace_back();
    auto& node = tree.nodes_[static_cast<std::size_t>(cur.node)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = li;
    node.right = li + 1;
    // right first so the left subtree is grown (and draws randomness) first
    stack.push_back({li + 1, std::move(right), cur.depth + 1});
    stack.push_back({li, std::move(left), cur.depth + 1});
  }
  return tree;
}

const TreeNode& DecisionTree::leaf_for(const Matrix& X, Eigen::Index row) const {
  const TreeNode* n = &nodes_.front();
  while (!n->leaf()) {
    n = &nodes_[static_cast<std::size_t>(X(row, n->feature) <= n->threshold ? n->left : n->right)];
  }
  return *n;
}

Vector DecisionTree::predict_proba(const Matrix& X) const {
  if (static_cast<std::size_t>(X.cols()) != n_features_) throw Error("feature count does not match the model");
  Vector out(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) out(i) = leaf_for(X, i).value;
  return out;
}

Labels DecisionTree::predict(const Matrix& X) const {
  const Vector p = predict_proba(X);
  Labels out(static_cast<std::size_t>(p.size()));
  for (Eigen::Index i = 0; i < p.size(); ++i) out[static_cast<std::size_t>(i)] = p(i) > 0.5 ? 1 : 0;
  return out;
}

Vector DecisionTree::feature_importance() const {
  Vector imp = Vector::Zero(static_cast<Eigen::Index>(n_features_));
  for (const auto& n : nodes_) {
    if (n.leaf()) continue;
    const auto& l = nodes_[static_cast<std::size_t>(n.left)];
    const auto& r = nodes_[static_cast<std::size_t>(n.right)];
    imp(n.feature) += static_cast<double>(n.samples) * n.impurity - static_cast<double>(l.samples) * l.impurity -
                      static_cast<double>(r.samples) * r.impurity;
  }
  imp = imp.cwiseMax(0.0);
  const double total = imp.sum();
  if (total > 0) imp /= total;
  return imp;
}

int DecisionTree::depth() const {
  std::vector<int> level(nodes_.size(), 0);
  int deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, level[i]);
    if (!nodes_[i].leaf()) {
      level[static_cast<std::size_t>(nodes_[i].left)] = level[i] + 1;
      level[static_cast<std::size_t>(nodes_[i].right)] = level[i] + 1;
    }
  }
  return deepest;
}

nlohmann::json DecisionTree::to_json() const {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : nodes_) {
    nodes.push_back({n.feature, n.threshold, n.left, n.right, n.value, n.samples, n.impurity});
  }
  return {{"features", n_features_}, {"nodes", nodes}};
}

DecisionTree DecisionTree::from_json(const nlohmann::json& j) {
  DecisionTree t;
  t.n_features_ = j.at("features").get<std::size_t>();
  for (const auto& a : j.at("nodes")) {
    TreeNode n;
    n.feature = a.at(0).get<int>();
    n.threshold = a.at(1).get<double>();
    n.left = a.at(2).get<int>();
    n.right = a.at(3).get<int>();
    n.value = a.at(4).get<double>();
    n.samples = a.at(5).get<std::int64_t>();
    n.impurity = a.at(6).get<double>();
    t.nodes_.push_back(n);
  }
  const auto count = static_cast<int>(t.nodes_.size());
  if (count == 0) throw Error("tree without nodes");
  for (const auto& n : t.nodes_) {
    if (!n.leaf() && (n.left <= 0 || n.right <= 0 || n.left >= count || n.right >= count ||
                      n.feature >= static_cast<int>(t.n_features_))) {
      throw Error("malformed tree node");
    }
  }
  return t;
}

std::uint64_t forest_tree_seed(std::uint64_t seed, std::size_t tree) {
  return tree == 0 ? seed : derive_seed(seed, static_cast<std::uint64_t>(tree));
}

RandomForest RandomForest::fit(const Matrix& X, const Labels& y, const RandomForestParams& p, std::uint64_t seed) {
  check_labels(X, y);
  if (X.rows() == 0) throw Error("cannot grow a forest on zero rows");
  RandomForest forest;
  Rng boot(derive_seed(seed, "bootstrap"));
  const auto n = static_cast<std::size_t>(X.rows());
  std::vector<std::size_t> rows;
  for (int t = 0; t < p.n_estimators; ++t) {
    rows.clear();
    if (p.bootstrap) {
      rows.resize(n);
      for (auto& r : rows) r = static_cast<std::size_t>(boot.index(n));
    }
    forest.trees_.push_back(DecisionTree::fit(X, y, p.tree, forest_tree_seed(seed, static_cast<std::size_t>(t)), rows));
  }
  return forest;
}

Vector RandomForest::predict_proba(const Matrix& X) const {
  Vector votes = Vector::Zero(X.rows());
  for (const auto& t : trees_) {
    const auto labels = t.predict(X);
    for (Eigen::Index i = 0; i < X.rows(); ++i) votes(i) += labels[static_cast<std::size_t>(i)];
  }
  return votes / static_cast<double>(trees_.size());
}

Vector RandomForest::feature_importance() const {
  Vector imp = Vector::Zero(trees_.empty() ? 0 : static_cast<Eigen::Index>(trees_.front().features()));
  for (const auto& t : trees_) imp += t.feature_importance();
  const double total = imp.sum();
  if (total > 0) imp /= total;
  return imp;
}

nlohmann::json RandomForest::to_json() const {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& t : trees_) trees.push_back(t.to_json());
  return {{"trees", trees}};
}

RandomForest RandomForest::from_json(const nlohmann::json& j) {
  RandomForest f;
  for (const auto& t : j.at("trees")) f.trees_.push_back(DecisionTree::from_json(t));
  if (f.trees_.empty()) throw Error("forest without trees");
  return f;
}

}  // namespace refpred::ml
